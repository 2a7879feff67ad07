// Acceptance criteria, one PASS/FAIL line each.
//
//   acceptance                 criteria 1-5 and 8-11
//   acceptance --only 6        a single criterion
//   acceptance --stretch       also criterion 7
//
// Exit status is 0 iff every selected criterion passed.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "support.hpp"
#include "wangforge/algebra.hpp"
#include "wangforge/macro.hpp"
#include "wangforge/paper.hpp"
#include "wangforge/search.hpp"
#include "wangforge/text_format.hpp"
#include "wangforge/tiler.hpp"

using namespace wangforge;

namespace {

struct Outcome {
  bool pass = false;
  std::string details;
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;  // 0 when untimed
  std::function<Outcome()> run;
};

std::string failed_ids(const std::vector<FactReport>& reports) {
  std::string out;
  for (const auto& r : reports)
    if (!r.pass) out += (out.empty() ? "" : ",") + r.id;
  return out;
}

Outcome from_reports(const std::vector<FactReport>& reports) {
  std::string bad = failed_ids(reports);
  std::ostringstream d;
  d << reports.size() << " facts";
  if (!bad.empty()) d << ", failed: " << bad;
  return {bad.empty(), d.str()};
}

Outcome criterion_empties(const char* name) { return from_reports({verify_empties(name)}); }

Outcome criterion_kari() {
  SeededReport r = seeded_row_analysis(named_tileset("Kari10like").tiles, 3, 40,
                                       Direction::reverse);
  std::ostringstream d;
  d << "first empty k = " << (r.first_empty_k ? std::to_string(*r.first_empty_k) : "none")
    << " (expected 31), longest seed path = "
    << (r.longest_seed_path ? std::to_string(*r.longest_seed_path) : "unbounded")
    << " (expected 212)";
  return {r.first_empty_k == std::size_t{31} && r.longest_seed_path == std::size_t{212},
          d.str()};
}

// Every single-tile deletion must empty by k = 31 in one common direction.
Outcome criterion_culik() {
  const Transducer full = named_tileset("Culik13").tiles;
  std::ostringstream d;
  bool any_direction = false;
  for (Direction dir : {Direction::forward, Direction::reverse}) {
    std::size_t worst = 0;
    bool all = true;
    for (std::size_t drop = 0; drop < full.size(); ++drop) {
      std::vector<Tile> kept;
      for (std::size_t i = 0; i < full.size(); ++i)
        if (i != drop) kept.push_back(full.tiles()[i]);
      Transducer t(full.h_count(), full.v_count(), kept);
      SeededReport r = seeded_row_analysis(t, 2, 31, dir);
      if (!r.first_empty_k) {
        all = false;
        break;
      }
      worst = std::max(worst, *r.first_empty_k);
    }
    d << to_string(dir) << ": " << (all ? "all 13 empty, latest k = " + std::to_string(worst)
                                        : std::string("some deletion survives k = 31"))
      << "; ";
    any_direction = any_direction || all;
  }
  return {any_direction, d.str()};
}

Outcome criterion_t11_evidence() {
  const Transducer t = named_tileset("T11").tiles;
  Transducer p = t;
  for (std::size_t k = 1; k <= 12; ++k) {
    if (k > 1) p = reduce(compose(p, t), Strategy::trim_and_minimize);
    if (has_periodic_point(p))
      return {false, "periodic point at k = " + std::to_string(k)};
  }
  RectangleResult r = tile_rectangle(t, 40, 40);
  if (!r.grid) return {false, "no 40 x 40 rectangle found"};
  if (auto bad = grid_violation(t.tiles(), *r.grid)) return {false, *bad};
  return {true, "no periodic point for k <= 12; 40 x 40 rectangle validated"};
}

Outcome criterion_oracle() {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<std::size_t> colors(1, 3);
  AperiodicityOptions o;
  o.budget.max_k = 5;
  o.max_period = 6;
  std::size_t disagreements = 0, counts[3] = {0, 0, 0};
  std::string first;
  for (int i = 0; i < 500; ++i) {
    Transducer t = wftest::random_transducer(rng, colors(rng), colors(rng), 5);
    Verdict v = test_aperiodicity(t, o);
    wftest::OracleVerdict e = wftest::oracle_verdict(t.tiles(), 5, 6);
    char kind = v.kind == Verdict::Kind::not_tiling ? 'N'
                : v.kind == Verdict::Kind::periodic ? 'P'
                                                    : 'U';
    ++counts[kind == 'N' ? 0 : kind == 'P' ? 1 : 2];
    bool agree = kind == e.kind && v.k == e.k && v.p == e.p;
    if (agree && v.torus) agree = !torus_violation(t.tiles(), *v.torus);
    if (!agree && disagreements++ == 0) first = write_wang(t);
  }
  std::ostringstream d;
  d << "500 sets (" << counts[0] << " not tiling, " << counts[1] << " periodic, " << counts[2]
    << " unknown), " << disagreements << " disagreements";
  if (!first.empty()) d << "; first:\n" << first;
  return {disagreements == 0, d.str()};
}

Outcome criterion_invariants() {
  std::mt19937 rng(99);
  std::uniform_int_distribution<std::size_t> colors(1, 3);
  std::size_t cases = 0;
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const char* what) {
    ++cases;
    if (!ok && failures.size() < 5) failures.push_back(what);
  };
  for (int i = 0; i < 250; ++i) {
    Transducer a = wftest::random_transducer(rng, colors(rng), 2, 6);
    Transducer b = wftest::random_transducer(rng, colors(rng), 2, 6);
    Transducer c = wftest::random_transducer(rng, colors(rng), 2, 6);
    expect(trim(trim(a)) == trim(a), "trim idempotence");
    expect(rotate(rotate(rotate(rotate(a)))) == a, "rotate^4 identity");
    expect(isomorphic(compose(compose(a, b), c), compose(a, compose(b, c))).has_value(),
           "composition associativity");
    Transducer ab = compose(a, b);
    std::size_t L = 1 + rng() % 8;
    expect(window_language(ab, L) == window_language(minimize_bisim(ab), L),
           "minimization window language");
    expect(read_wang(write_wang(ab)) == ab && write_wang(read_wang(write_wang(ab))) == write_wang(ab),
           "text round trip");
  }
  std::ostringstream d;
  d << cases << " cases";
  for (const auto& f : failures) d << "; failed: " << f;
  return {failures.empty(), d.str()};
}

Outcome criterion_sturmian() {
  Pipeline p = build_pipeline();
  NamedTileset td{"TD", p.TD, "ab", {p.Ta, p.Tb}};
  auto word = find_row_word(td, 60);
  if (!word) return {false, "no strip of 60 rows"};
  auto factors = fibonacci_factors(12);
  for (std::size_t len = 1; len <= 12; ++len)
    for (std::size_t i = 0; i + len <= word->size(); ++i)
      if (!factors.count(word->substr(i, len)))
        return {false, "row word " + *word + " has factor " + word->substr(i, len)};
  return {true, "row word " + *word};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runs the acceptance criteria and prints one line per criterion."};
  std::vector<int> only;
  bool stretch = false;
  app.add_option("--only", only, "Run only these criteria");
  app.add_flag("--stretch", stretch, "Include criterion 7 (about 17 minutes)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "T11 emptiness facts", 1, [] { return criterion_empties("T11"); }},
      {2, "T11prime emptiness facts", 5, [] { return criterion_empties("T11prime"); }},
      {3, "pipeline T_A to T_D", 10, [] { return from_reports(verify_pipeline()); }},
      {4, "base cases", 30, [] { return from_reports(verify_base_cases()); }},
      {5, "recursion n = 0..2", 300, [] { return from_reports(verify_recursion(2)); }},
      {6, "10-tile seeded refutation", 1800, criterion_kari},
      {7, "Culik-13 single-tile deletions", 7200, criterion_culik},
      {8, "T11 aperiodicity evidence", 600, criterion_t11_evidence},
      {9, "oracle equivalence", 0, criterion_oracle},
      {10, "invariant suite", 120, criterion_invariants},
      {11, "Sturmian row word", 0, criterion_sturmian},
  };

  bool ok = true;
  for (const auto& c : all) {
    bool selected = only.empty() ? (c.id != 6 && c.id != 7) || (c.id == 7 && stretch)
                                 : std::count(only.begin(), only.end(), c.id) > 0;
    if (!selected) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = c.limit_seconds == 0 || secs <= c.limit_seconds;
    bool pass = o.pass && in_time;
    std::printf("criterion %d: %s | %s | %s | %.2f s%s\n", c.id, pass ? "PASS" : "FAIL",
                c.title.c_str(), o.details.c_str(), secs,
                in_time ? "" : " (over time limit)");
    std::fflush(stdout);
    ok = ok && pass;
  }
  return ok ? 0 : 1;
}
