#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace glyphgrid {

// One labeled text record. Labels are 1-based (1..num_classes), matching
// the CSV convention; they are shifted to 0-based only inside the
// classifier.
struct LabeledSample {
  int label = 0;
  std::string text;
};

struct Corpus {
  std::string name;
  int num_classes = 0;
  std::vector<LabeledSample> samples;
};

// Which CSV columns after the label make up the text, 1-based, joined by
// single spaces. Empty means all of them.
struct ColumnSpec {
  std::vector<int> columns;

  static ColumnSpec parse(const std::string& spec);  // "1,2" etc.
};

// Streams labeled samples out of a CSV file whose first column is the
// integer label. Rows are delivered in file order, one callback per
// non-empty row. Throws IoError/CsvError on unreadable or malformed
// input (rows with < 2 fields, non-integer or out-of-range labels).
void for_each_sample(const std::filesystem::path& path, int num_classes,
                     const ColumnSpec& columns,
                     const std::function<void(LabeledSample&&)>& fn);

// Materialized ingestion for desk-scale corpora.
Corpus read_csv(const std::filesystem::path& path, int num_classes,
                const ColumnSpec& columns = {});

// Text length statistics, measured in grapheme clusters after char-level
// segmentation. Percentiles use the nearest-rank method, so p50 is the
// lower median for even counts.
struct LengthStats {
  std::size_t count = 0;
  double mean = 0.0;
  std::size_t median = 0;
  std::size_t p50 = 0;
  std::size_t p90 = 0;
  std::size_t p99 = 0;
  std::size_t max = 0;
};

// Order-independent accumulator so stats can be built while streaming.
class LengthStatsAccumulator {
 public:
  void add(std::string_view text);
  void add_length(std::size_t length);
  LengthStats finish() const;  // throws IoError when nothing was added

 private:
  std::vector<std::size_t> lengths_;
};

LengthStats length_stats(const Corpus& corpus);

struct GridChoice {
  int grid_dim = 0;
  int cut_length = 0;
};

// Smallest candidate grid whose cut_length covers the median length;
// the largest candidate when none does.
GridChoice suggest_cut_length(const LengthStats& stats,
                              const std::vector<int>& candidate_grids = {8, 14, 16, 28, 32});

}  // namespace glyphgrid
