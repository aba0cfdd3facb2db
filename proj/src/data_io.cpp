#include "oco/data_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string_view>

#include "oco/errors.hpp"
#include "oco/random.hpp"

namespace oco {

double Dataset::positive_fraction() const {
  if (examples.empty()) return 0.0;
  const auto pos = std::count_if(examples.begin(), examples.end(),
                                 [](const Example& e) { return e.label > 0.0; });
  return static_cast<double>(pos) / static_cast<double>(examples.size());
}

namespace {

std::string_view strip_plus(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = strip_plus(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_index(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::string name) {
  Dataset data;
  data.meta.name = std::move(name);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);

    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < view.size()) {
      while (pos < view.size() && std::isspace(static_cast<unsigned char>(view[pos]))) ++pos;
      std::size_t end = pos;
      while (end < view.size() && !std::isspace(static_cast<unsigned char>(view[end]))) ++end;
      if (end > pos) tokens.push_back(view.substr(pos, end - pos));
      pos = end;
    }
    if (tokens.empty()) continue;

    Example ex;
    double label = 0.0;
    if (!parse_double(tokens[0], label)) {
      throw ParseError(lineno, "non-numeric label '" + std::string(tokens[0]) + "'");
    }
    if (label == 1.0) {
      ex.label = 1.0;
    } else if (label == 0.0 || label == -1.0) {
      ex.label = -1.0;
    } else {
      throw ParseError(lineno, "label must be one of -1, 0, +1");
    }

    std::vector<SparseVector::Entry> entries;
    entries.reserve(tokens.size() - 1);
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      const auto colon = tokens[k].find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(lineno, "malformed token '" + std::string(tokens[k]) + "'");
      }
      std::size_t index = 0;
      double value = 0.0;
      if (!parse_index(tokens[k].substr(0, colon), index) || index == 0) {
        throw ParseError(lineno, "bad feature index in '" + std::string(tokens[k]) + "'");
      }
      if (!parse_double(tokens[k].substr(colon + 1), value)) {
        throw ParseError(lineno, "non-numeric value in '" + std::string(tokens[k]) + "'");
      }
      entries.emplace_back(index - 1, value);
    }
    try {
      ex.features = SparseVector::from_entries(std::move(entries));
    } catch (const InvalidInput& e) {
      throw ParseError(lineno, e.what());
    }
    if (auto m = ex.features.max_index()) data.dimension = std::max(data.dimension, *m + 1);
    data.examples.push_back(std::move(ex));
  }
  if (data.examples.empty()) throw InvalidInput("empty dataset");
  return data;
}

Dataset load_libsvm(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

  if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
      static_cast<unsigned char>(bytes[1]) == 0x8b) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (!gz) throw InvalidInput("cannot open gzip stream " + path);
    std::string inflated;
    char buf[1 << 16];
    int got;
    while ((got = gzread(gz, buf, sizeof buf)) > 0) inflated.append(buf, static_cast<std::size_t>(got));
    const bool failed = got < 0;
    gzclose(gz);
    if (failed) throw InvalidInput("corrupt gzip stream " + path);
    bytes = std::move(inflated);
  }
  std::istringstream in(bytes);
  std::string name = path.substr(path.find_last_of('/') + 1);
  for (const std::string_view ext : {".gz", ".libsvm", ".svm"}) {
    if (name.size() > ext.size() && name.ends_with(ext)) name.resize(name.size() - ext.size());
  }
  Dataset data = parse_libsvm(in, name);
  data.meta.source = path;
  return data;
}

std::string to_libsvm(const Dataset& data) {
  std::string out;
  char buf[64];
  for (const auto& ex : data.examples) {
    out += ex.label > 0.0 ? "+1" : "-1";
    for (const auto& [i, v] : ex.features) {
      std::snprintf(buf, sizeof buf, " %zu:%.17g", i + 1, v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Dataset shuffle(Dataset data, std::uint64_t seed) {
  Rng rng(seed);
  auto& ex = data.examples;
  for (std::size_t i = ex.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(ex[i - 1], ex[j]);
  }
  return data;
}

Dataset unit_scale(Dataset data) {
  for (auto& ex : data.examples) {
    const double norm = std::sqrt(ex.features.squared_norm());
    if (norm == 0.0) {
      ++data.meta.zero_vectors;
      continue;
    }
    ex.features = scaled(ex.features, 1.0 / norm);
  }
  return data;
}

namespace {

// Cumulative weights k^-s, k = 1..n, normalized to end at 1.
std::vector<double> zipf_cdf(std::size_t n, double s) {
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += std::pow(static_cast<double>(k + 1), -s);
    cdf[k] = acc;
  }
  for (auto& c : cdf) c /= acc;
  return cdf;
}

std::size_t draw(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

Dataset make_sentiment_sample(const SentimentOptions& o) {
  if (o.vocabulary < 2 * o.lexicon || o.lexicon == 0) {
    throw ConfigError("sentiment vocabulary must hold both lexicons");
  }
  Rng rng(o.seed);

  // Random vocabulary ranks for the two lexicons so polar words appear at
  // every frequency.
  std::vector<std::size_t> words(o.vocabulary);
  for (std::size_t i = 0; i < words.size(); ++i) words[i] = i;
  for (std::size_t i = words.size(); i > 1; --i) std::swap(words[i - 1], words[rng.below(i)]);
  const std::vector<std::size_t> positive(words.begin(), words.begin() + o.lexicon);
  const std::vector<std::size_t> negative(words.begin() + o.lexicon, words.begin() + 2 * o.lexicon);

  const auto background = zipf_cdf(o.vocabulary, 1.0);
  const auto lexicon = zipf_cdf(o.lexicon, 1.0);

  Dataset data;
  data.meta.name = "sentiment_sample";
  data.meta.source = "synthetic";
  data.dimension = o.vocabulary;
  for (std::size_t n = 0; n < o.examples; ++n) {
    const double label = (n % 2 == 0) ? 1.0 : -1.0;
    const std::size_t length = 40 + rng.below(160);
    std::vector<double> counts(o.vocabulary, 0.0);
    for (std::size_t k = 0; k < length; ++k) {
      if (rng.bernoulli(o.polar_token_rate)) {
        const auto& lex = label > 0.0 ? positive : negative;
        counts[lex[draw(lexicon, rng)]] += 1.0;
      } else {
        counts[draw(background, rng)] += 1.0;
      }
    }
    Example ex;
    ex.features = SparseVector::from_dense(counts);
    ex.label = rng.bernoulli(o.label_noise) ? -label : label;
    data.examples.push_back(std::move(ex));
  }
  return data;
}

Dataset make_ctr_stream(const CtrOptions& o) {
  if (o.examples == 0 || o.queries == 0) throw ConfigError("empty CTR configuration");
  Rng rng(o.seed);
  // Index 0 is the bias; query q lives at index q + 1.
  std::vector<double> weight(o.queries);
  for (auto& w : weight) w = rng.uniform(-o.query_weight, o.query_weight);
  const auto cdf = zipf_cdf(o.queries, o.zipf_exponent);

  Dataset data;
  data.meta.name = "synthetic_ctr";
  data.meta.source = "synthetic";
  data.examples.reserve(o.examples);
  for (std::size_t n = 0; n < o.examples; ++n) {
    const std::size_t q = draw(cdf, rng);
    const double margin = o.bias + weight[q];
    Example ex;
    ex.features = SparseVector{{0, 1.0}, {q + 1, 1.0}};
    ex.label = rng.bernoulli(1.0 / (1.0 + std::exp(-margin))) ? 1.0 : -1.0;
    data.dimension = std::max(data.dimension, q + 2);
    data.examples.push_back(std::move(ex));
  }
  return data;
}

std::string format_float(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string write_results_csv(std::span<const ResultRow> rows,
                              std::span<const std::pair<std::string, std::string>> config) {
  for (const auto& row : rows) {
    if (!row.ledger || !row.ledger->resolved()) {
      throw ContractViolation("unresolved ledger for run " + row.dataset + "/" + row.algorithm);
    }
  }
  std::ostringstream os;
  for (const auto& [k, v] : config) os << "# " << k << " = " << v << "\n";
  os << kResultsCsvHeader << "\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_float(*v) : std::string(); };
  for (const auto& row : rows) {
    const RegretLedger& l = *row.ledger;
    os << row.dataset << ',' << row.algorithm << ',' << format_float(row.scale_factor) << ','
       << format_float(row.radius) << ',' << format_float(row.lambda) << ',' << row.seed << ','
       << l.rounds() << ',' << format_float(l.cumulative_loss()) << ',' << opt(l.comparator_loss()) << ','
       << (l.has_comparator() ? (l.comparator_converged() ? "true" : "false") : "") << ','
       << opt(l.regret()) << ',' << opt(l.regret_per_round()) << ',' << opt(row.avg_hinge_loss) << ','
       << opt(row.mistake_fraction) << ',' << opt(row.wall_ms) << "\n";
  }
  return os.str();
}

}  // namespace oco
