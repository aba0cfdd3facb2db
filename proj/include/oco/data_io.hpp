#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oco/bounds.hpp"
#include "oco/core.hpp"

namespace oco {

struct DatasetMetadata {
  std::string name;
  std::string source;
  std::size_t zero_vectors = 0;  // counted by unit_scale
};

struct Dataset {
  std::vector<Example> examples;
  std::size_t dimension = 0;  // max feature index + 1
  DatasetMetadata meta;

  std::size_t size() const { return examples.size(); }
  double positive_fraction() const;
};

// LIBSVM text: "label idx:val idx:val ...". Labels {0,1} become {-1,+1};
// indices are 1-based on disk and 0-based in memory. Anything after '#' is a
// comment. Throws ParseError with the offending line; an empty input throws
// InvalidInput.
Dataset parse_libsvm(std::istream& in, std::string name = "");
// Reads a file, transparently inflating gzip input (detected by magic bytes).
Dataset load_libsvm(const std::string& path);
// Inverse of parse_libsvm with values printed to round-trip exactly.
std::string to_libsvm(const Dataset& data);

// Fisher-Yates over Rng(seed); identical seeds give identical orders everywhere.
Dataset shuffle(Dataset data, std::uint64_t seed);
// Divides every nonzero feature vector by its L2 norm.
Dataset unit_scale(Dataset data);

// Bag-of-words sentiment sample: Zipfian vocabulary with label-specific
// lexicons, raw counts, balanced labels.
struct SentimentOptions {
  std::size_t examples = 2000;
  std::size_t vocabulary = 3000;
  std::size_t lexicon = 600;  // polar words per class
  double polar_token_rate = 0.12;
  double label_noise = 0.05;
  std::uint64_t seed = 2010;
};
Dataset make_sentiment_sample(const SentimentOptions& options);

// Click-through stream for a single ad shown against many queries. Each
// impression carries a bias feature and one query feature. Query frequencies
// follow a power law, so a few queries are common and most are rare, and the
// per-query click log-odds spread widely around the bias.
struct CtrOptions {
  std::size_t examples = 100000;
  std::size_t queries = 400;
  double zipf_exponent = 1.0;
  double query_weight = 8.0;
  double bias = -1.0;
  std::uint64_t seed = 7;
};
Dataset make_ctr_stream(const CtrOptions& options);

// One CSV row per (dataset, algorithm).
struct ResultRow {
  std::string dataset;
  std::string algorithm;
  double scale_factor = 1.0;
  double radius = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  const RegretLedger* ledger = nullptr;
  std::optional<double> avg_hinge_loss;
  std::optional<double> mistake_fraction;
  std::optional<double> wall_ms;
};

inline constexpr const char* kResultsCsvHeader =
    "dataset,algorithm,scale_factor,R,lambda,seed,T,cumulative_loss,comparator_loss,"
    "comparator_converged,regret,regret_per_round,avg_hinge_loss,mistake_fraction,wall_ms";

// Config pairs become '# key = value' lines ahead of the header. Floats use
// 6 significant digits. Rows with an unresolved ledger throw
// ContractViolation naming the run.
std::string write_results_csv(std::span<const ResultRow> rows,
                              std::span<const std::pair<std::string, std::string>> config);

// "%.6g"
std::string format_float(double v);

}  // namespace oco
