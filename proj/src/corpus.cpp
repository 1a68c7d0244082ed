#include "glyphgrid/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

#include "glyphgrid/csv.hpp"
#include "glyphgrid/errors.hpp"
#include "glyphgrid/layout.hpp"

namespace glyphgrid {

namespace {

// Whole-field integer parse; no leading/trailing junk.
bool parse_int(const std::string& field, int& out) {
  const char* first = field.data();
  const char* last = first + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

ColumnSpec ColumnSpec::parse(const std::string& spec) {
  ColumnSpec out;
  if (spec.empty()) return out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    std::string token = spec.substr(pos, comma - pos);
    int column = 0;
    if (!parse_int(token, column) || column < 1) {
      throw ConfigError("bad column spec '" + spec +
                        "': expected comma-separated 1-based indices");
    }
    out.columns.push_back(column);
    pos = comma + 1;
  }
  return out;
}

void for_each_sample(const std::filesystem::path& path, int num_classes,
                     const ColumnSpec& columns,
                     const std::function<void(LabeledSample&&)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  CsvReader reader(in);
  std::size_t delivered = 0;
  while (auto row = reader.next_row()) {
    const std::size_t line = reader.row_line();
    if (row->size() < 2) {
      throw CsvError(line, "malformed row: expected a label plus at least one text field");
    }

    LabeledSample sample;
    if (!parse_int((*row)[0], sample.label)) {
      throw CsvError(line, "malformed row: label '" + (*row)[0] + "' is not an integer");
    }
    if (sample.label < 1 || sample.label > num_classes) {
      throw CsvError(line, "label " + std::to_string(sample.label) + " out of range 1.." +
                               std::to_string(num_classes));
    }

    // Column indices are 1-based over the fields after the label; an empty
    // spec takes all of them. Selected fields are space-joined.
    auto append = [&sample](const std::string& field) {
      if (!sample.text.empty()) sample.text += ' ';
      sample.text += field;
    };
    if (columns.columns.empty()) {
      for (std::size_t i = 1; i < row->size(); ++i) append((*row)[i]);
    } else {
      for (int column : columns.columns) {
        const std::size_t index = static_cast<std::size_t>(column);
        if (index >= row->size()) {
          throw CsvError(line, "malformed row: text column " + std::to_string(column) +
                                   " missing (row has " + std::to_string(row->size() - 1) +
                                   " text fields)");
        }
        append((*row)[index]);
      }
    }

    fn(std::move(sample));
    ++delivered;
  }

  if (delivered == 0) throw IoError(path.string() + ": no data rows");
}

Corpus read_csv(const std::filesystem::path& path, int num_classes,
                const ColumnSpec& columns) {
  Corpus corpus;
  corpus.name = path.stem().string();
  corpus.num_classes = num_classes;
  for_each_sample(path, num_classes, columns,
                  [&corpus](LabeledSample&& sample) { corpus.samples.push_back(std::move(sample)); });
  return corpus;
}

void LengthStatsAccumulator::add(std::string_view text) {
  add_length(segment(text, Segmentation::char_level).size());
}

void LengthStatsAccumulator::add_length(std::size_t length) {
  lengths_.push_back(length);
}

LengthStats LengthStatsAccumulator::finish() const {
  if (lengths_.empty()) throw IoError("length stats on an empty corpus");

  std::vector<std::size_t> sorted = lengths_;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  // Nearest-rank percentile: the value at rank ceil(p*n/100), 1-based. For
  // even n this makes p50 the lower median.
  auto percentile = [&sorted, n](std::size_t p) {
    std::size_t rank = (p * n + 99) / 100;
    if (rank < 1) rank = 1;
    return sorted[rank - 1];
  };

  LengthStats stats;
  stats.count = n;
  stats.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  stats.p50 = percentile(50);
  stats.median = stats.p50;
  stats.p90 = percentile(90);
  stats.p99 = percentile(99);
  stats.max = sorted.back();
  return stats;
}

LengthStats length_stats(const Corpus& corpus) {
  LengthStatsAccumulator acc;
  for (const LabeledSample& sample : corpus.samples) acc.add(sample.text);
  return acc.finish();
}

GridChoice suggest_cut_length(const LengthStats& stats, const std::vector<int>& candidate_grids) {
  if (candidate_grids.empty()) throw ConfigError("suggest_cut_length: no candidate grids");
  std::vector<int> grids = candidate_grids;
  std::sort(grids.begin(), grids.end());
  for (int g : grids) {
    if (g < 1) throw ConfigError("suggest_cut_length: grid dimensions must be positive");
    if (static_cast<std::size_t>(g) * static_cast<std::size_t>(g) >= stats.median) {
      return {g, g * g};
    }
  }
  const int largest = grids.back();
  return {largest, largest * largest};
}

}  // namespace glyphgrid
