#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oco/bounds.hpp"
#include "oco/data_io.hpp"
#include "oco/errors.hpp"
#include "oco/random.hpp"

using namespace oco;

namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_libsvm(in, "inline");
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

Dataset numbered(std::size_t n) {
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) d.examples.push_back(Example{SparseVector{{i, 1.0}}, i % 2 ? 1.0 : -1.0});
  d.dimension = n;
  return d;
}

}  // namespace

TEST_CASE("parse examples") {
  const Dataset d = parse("+1 1:0.5 3:0.5\n0 2:1\n");
  REQUIRE(d.size() == 2);
  CHECK(d.examples[0] == Example{SparseVector{{0, 0.5}, {2, 0.5}}, 1.0});
  CHECK(d.examples[1].label == -1.0);
  CHECK(d.examples[1].features == SparseVector{{1, 1.0}});
  CHECK(d.dimension == 3);
  CHECK(d.positive_fraction() == 0.5);
  CHECK(d.meta.name == "inline");
}

TEST_CASE("parse accepts -1 labels, comments, blank lines and unordered indices") {
  const Dataset d = parse("# header\n\n-1 4:2 2:1 # trailing\n1\n");
  REQUIRE(d.size() == 2);
  CHECK(d.examples[0] == Example{SparseVector{{1, 1.0}, {3, 2.0}}, -1.0});
  CHECK(d.examples[1].features.empty());
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(parse_error_line("1 1:1 1:2\n") == 1);
  CHECK(parse_error_line("1 1:1\n\n1 2:x\n") == 3);
  CHECK(parse_error_line("1 1:1\n-1 a:1\n") == 2);
  CHECK(parse_error_line("1 0:1\n") == 1);
  CHECK(parse_error_line("2 1:1\n") == 1);
  CHECK(parse_error_line("abc 1:1\n") == 1);
  CHECK(parse_error_line("1 1:\n") == 1);
  CHECK(parse_error_line("1 1:1.5e\n") == 1);
  CHECK(parse_error_line("1 1:nan\n") == 1);
  CHECK_THROWS_AS(parse(""), InvalidInput);
  CHECK_THROWS_AS(parse("# only a comment\n\n"), InvalidInput);
}

TEST_CASE("serialization round-trips") {
  const Dataset d = parse("1 1:0.1 7:-3.25e-7\n0 2:123456789.123\n-1\n");
  const Dataset again = parse(to_libsvm(d));
  CHECK(again.examples == d.examples);
  CHECK(again.dimension == d.dimension);
}

TEST_CASE("shuffle is a deterministic permutation") {
  const Dataset d = numbered(100);
  const Dataset a = shuffle(d, 42);
  const Dataset b = shuffle(d, 42);
  const Dataset c = shuffle(d, 43);
  CHECK(a.examples == b.examples);
  CHECK(a.examples != c.examples);
  CHECK(a.examples != d.examples);

  auto key = [](const Example& e) { return e.features.begin()->first; };
  std::vector<std::size_t> seen;
  for (const auto& e : a.examples) seen.push_back(key(e));
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < 100; ++i) CHECK(seen[i] == i);

  const Dataset one = numbered(1);
  CHECK(shuffle(one, 9).examples == one.examples);
  CHECK(shuffle(Dataset{}, 9).examples.empty());
}

TEST_CASE("shuffle order is pinned") {
  // Fisher-Yates over mt19937_64 with rejection-sampled bounded draws. A change
  // here silently changes every published CSV.
  const Dataset a = shuffle(numbered(10), 2010);
  std::vector<std::size_t> order;
  for (const auto& e : a.examples) order.push_back(e.features.begin()->first);
  Rng rng(2010);
  std::vector<std::size_t> expected(10);
  for (std::size_t i = 0; i < 10; ++i) expected[i] = i;
  for (std::size_t i = 9; i > 0; --i) std::swap(expected[i], expected[rng.below(i + 1)]);
  CHECK(order == expected);
}

TEST_CASE("unit scaling") {
  Dataset d;
  d.examples.push_back(Example{SparseVector{{0, 3.0}, {1, 4.0}}, 1.0});
  d.examples.push_back(Example{SparseVector{}, -1.0});
  d.examples.push_back(Example{SparseVector{{5, 0.6}, {9, -0.8}}, 1.0});
  const Dataset s = unit_scale(d);
  CHECK(s.examples[0].features[0] == doctest::Approx(0.6));
  CHECK(s.examples[0].features[1] == doctest::Approx(0.8));
  CHECK(s.examples[1].features.empty());
  CHECK(s.meta.zero_vectors == 1);
  CHECK(std::abs(s.examples[2].features[5] - 0.6) <= 1e-12);
  CHECK(std::abs(s.examples[2].features[9] + 0.8) <= 1e-12);
  for (const auto& e : s.examples) {
    if (!e.features.empty()) CHECK(std::abs(std::sqrt(e.features.squared_norm()) - 1.0) <= 1e-9);
  }
}

TEST_CASE("results CSV") {
  RegretLedger a, b;
  a.record(1.0, SparseVector{{0, 1.0}});
  a.record(2.0, SparseVector{{0, 1.0}});
  a.resolve(0.5, true);
  b.record(4.0, SparseVector{{0, 1.0}});
  b.record(0.0, SparseVector{});
  b.resolve(0.5, false);

  ResultRow ra;
  ra.dataset = "toy";
  ra.algorithm = "global";
  ra.scale_factor = 0.1;
  ra.radius = 1.0;
  ra.seed = 7;
  ra.ledger = &a;
  ResultRow rb = ra;
  rb.algorithm = "per-coord";
  rb.ledger = &b;
  rb.wall_ms = 12.5;
  const std::vector<ResultRow> rows{ra, rb};
  const std::vector<std::pair<std::string, std::string>> config{{"experiment", "logreg"}, {"seed", "7"}};

  const auto out = lines(write_results_csv(rows, config));
  REQUIRE(out.size() == 5);
  CHECK(out[0] == "# experiment = logreg");
  CHECK(out[1] == "# seed = 7");
  CHECK(out[2] == kResultsCsvHeader);
  CHECK(out[3] == "toy,global,0.1,1,0,7,2,3,0.5,true,2.5,1.25,,,");
  CHECK(out[4] == "toy,per-coord,0.1,1,0,7,2,4,0.5,false,3.5,1.75,,,12.5");
}

TEST_CASE("results CSV refuses unresolved ledgers") {
  RegretLedger pending;
  pending.record(1.0, SparseVector{{0, 1.0}});
  ResultRow r;
  r.dataset = "toy";
  r.algorithm = "per-coord";
  r.ledger = &pending;
  const std::vector<ResultRow> rows{r};
  try {
    write_results_csv(rows, {});
    FAIL("expected a refusal");
  } catch (const ContractViolation& e) {
    CHECK(std::string(e.what()).find("toy/per-coord") != std::string::npos);
  }
}

TEST_CASE("classification rows leave regret columns empty") {
  RegretLedger l;
  l.record(0.5, SparseVector{{0, 1.0}});
  l.mark_not_applicable();
  ResultRow r;
  r.dataset = "s";
  r.algorithm = "pa";
  r.radius = std::numeric_limits<double>::infinity();
  r.ledger = &l;
  r.avg_hinge_loss = 0.5;
  r.mistake_fraction = 0.0;
  const std::vector<ResultRow> rows{r};
  CHECK(lines(write_results_csv(rows, {})).back() == "s,pa,1,inf,0,0,1,0.5,,,,,0.5,0,");
}

TEST_CASE("floats use six significant digits") {
  CHECK(format_float(0.1234567) == "0.123457");
  CHECK(format_float(1234567.0) == "1.23457e+06");
  CHECK(format_float(2.0) == "2");
}

TEST_CASE("sentiment generator") {
  const Dataset a = make_sentiment_sample(SentimentOptions{});
  const Dataset b = make_sentiment_sample(SentimentOptions{});
  CHECK(a.size() == 2000);
  CHECK(a.examples == b.examples);
  CHECK(a.dimension <= 3000);
  // Labels alternate before noise flips a few of them.
  CHECK(std::abs(a.positive_fraction() - 0.5) < 0.05);
  for (const auto& e : a.examples) {
    CHECK((e.label == 1.0 || e.label == -1.0));
    for (const auto& [i, v] : e.features) CHECK(v == std::floor(v));
  }
}

TEST_CASE("click-through generator") {
  CtrOptions o;
  o.examples = 5000;
  const Dataset a = make_ctr_stream(o);
  CHECK(a.size() == 5000);
  CHECK(a.dimension <= o.queries + 1);
  std::vector<std::size_t> counts(o.queries + 1, 0);
  for (const auto& e : a.examples) {
    REQUIRE(e.features.nnz() == 2);
    CHECK(e.features[0] == 1.0);
    CHECK((e.label == 1.0 || e.label == -1.0));
    counts[e.features.entries()[1].first]++;
  }
  // Power-law frequencies: the most common query dwarfs the median one.
  std::vector<std::size_t> sorted(counts.begin() + 1, counts.end());
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted.back() > 20 * std::max<std::size_t>(1, sorted[sorted.size() / 2]));

  o.seed = 8;
  CHECK(make_ctr_stream(o).examples != a.examples);
  o.examples = 0;
  CHECK_THROWS_AS(make_ctr_stream(o), ConfigError);
}

TEST_CASE("bundled datasets load, match their generators and round-trip") {
  const Dataset sentiment = load_libsvm(std::string(OCO_DATA_DIR) + "/sentiment_sample.libsvm");
  CHECK(sentiment.meta.name == "sentiment_sample");
  CHECK(sentiment.examples == make_sentiment_sample(SentimentOptions{}).examples);
  CHECK(parse(to_libsvm(sentiment)).examples == sentiment.examples);

  const Dataset ctr = load_libsvm(std::string(OCO_DATA_DIR) + "/ctr_stream.libsvm.gz");
  CHECK(ctr.meta.name == "ctr_stream");
  CHECK(ctr.examples == make_ctr_stream(CtrOptions{}).examples);
  CHECK(parse(to_libsvm(ctr)).examples == ctr.examples);

  CHECK_THROWS(load_libsvm(std::string(OCO_DATA_DIR) + "/does_not_exist.libsvm"));
}
