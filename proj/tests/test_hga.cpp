#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "hgacluster/error.hpp"
#include "hgacluster/hga.hpp"
#include "support.hpp"

using namespace hgacluster;

namespace {

Chromosome with_fitness(std::string_view bits, double f) {
  Chromosome c = Chromosome::from_string(bits);
  c.cache_fitness(f);
  return c;
}

double assigned_distance(std::span<const Point> pts, const Chromosome& c, Point low, Point high) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) sum += euclidean_distance(pts[i], c[i] == 0 ? low : high);
  return sum;
}

}  // namespace

TEST_SUITE("hga") {
  TEST_CASE("config validation") {
    HgaConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.population_size == 2500);
    CHECK(cfg.doldrum_window() == 5000);
    cfg.population_size = 1;
    CHECK_THROWS_AS(cfg.validate(), ContractError);
    cfg = HgaConfig{};
    cfg.doldrum_factor = 0;
    CHECK_THROWS_AS(cfg.validate(), ContractError);
    cfg = HgaConfig{};
    cfg.max_generations = 0;
    CHECK_THROWS_AS(cfg.validate(), ContractError);
  }

  TEST_CASE("initial population shape and determinism") {
    Rng pts_rng(1);
    const auto pts = testing::to_points(oracle::random_points(pts_rng, 5));
    HgaConfig cfg;
    cfg.population_size = 4;
    Rng a(123);
    Rng b(123);
    const Population p = init_population(pts, cfg, a);
    const Population q = init_population(pts, cfg, b);
    REQUIRE(p.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(p[i].size() == 5);
      CHECK(p[i] == q[i]);
      REQUIRE(p[i].cached_fitness().has_value());
      const double f = *p[i].cached_fitness();
      const double g = chromosome_fitness(pts, p[i]).f;
      CHECK((f == g || (std::isinf(f) && std::isinf(g))));
    }
  }

  TEST_CASE("full-size population on 303 points") {
    Rng pts_rng(2);
    const auto pts = testing::to_points(oracle::random_points(pts_rng, 303));
    HgaConfig cfg;
    Rng rng(9);
    const Population p = init_population(pts, cfg, rng);
    CHECK(p.size() == 2500);
    for (const auto& c : p.chromosomes()) CHECK(c.cached_fitness().has_value());
    CHECK(p.min_fitness() <= p.max_fitness());
  }

  TEST_CASE("parent selection") {
    SUBCASE("two chromosomes are always both chosen") {
      const Population pop({with_fitness("01", 1.0), with_fitness("10", 2.0)});
      Rng rng(5);
      for (int i = 0; i < 100; ++i) {
        const auto [a, b] = select_parents(pop, rng);
        CHECK(a != b);
        CHECK(a + b == 1);
      }
    }
    SUBCASE("each of ten indices is chosen 20% of the time") {
      std::vector<Chromosome> cs;
      for (int i = 0; i < 10; ++i) cs.push_back(with_fitness("01", i));
      const Population pop(std::move(cs));
      Rng rng(31337);
      std::vector<std::size_t> hits(10, 0);
      const int draws = 100000;
      for (int i = 0; i < draws; ++i) {
        const auto [a, b] = select_parents(pop, rng);
        REQUIRE(a != b);
        ++hits[a];
        ++hits[b];
      }
      for (std::size_t h : hits) CHECK(std::abs(static_cast<double>(h) / draws - 0.2) <= 0.01);
    }
    SUBCASE("same seed, same pairs") {
      const Population pop({with_fitness("01", 1.0), with_fitness("10", 2.0), with_fitness("11", 3.0)});
      Rng a(8);
      Rng b(8);
      for (int i = 0; i < 50; ++i) CHECK(select_parents(pop, a) == select_parents(pop, b));
    }
  }

  TEST_CASE("one-point crossover") {
    SUBCASE("worked example with cut after gene 4") {
      const auto [o1, o2] = crossover_at(Chromosome::from_string("10110"), Chromosome::from_string("00011"), 4);
      CHECK(o1.to_string() == "10111");
      CHECK(o2.to_string() == "00010");
    }
    SUBCASE("identical parents reproduce themselves") {
      const Chromosome p = Chromosome::from_string("1100101");
      for (std::size_t cut = 1; cut < 7; ++cut) {
        const auto [a, b] = crossover_at(p, p, cut);
        CHECK(a == p);
        CHECK(b == p);
      }
    }
    SUBCASE("two genes force cut 1") {
      Rng rng(3);
      for (int i = 0; i < 20; ++i) {
        const auto [a, b] = one_point_crossover(Chromosome::from_string("10"), Chromosome::from_string("01"), rng);
        CHECK(a.to_string() == "11");
        CHECK(b.to_string() == "00");
      }
    }
    SUBCASE("cuts cover 1..n-1") {
      Rng rng(4);
      const Chromosome zeros = Chromosome::from_string("000000");
      const Chromosome ones = Chromosome::from_string("111111");
      std::map<std::string, int> seen;
      for (int i = 0; i < 500; ++i) ++seen[one_point_crossover(zeros, ones, rng).first.to_string()];
      CHECK(seen.size() == 5);
      CHECK(seen.count("000000") == 0);
      CHECK(seen.count("011111") == 1);
      CHECK(seen.count("000001") == 1);
    }
    SUBCASE("length mismatch") {
      Rng rng(1);
      CHECK_THROWS_AS(one_point_crossover(Chromosome::from_string("10"), Chromosome::from_string("101"), rng),
                      ContractError);
      CHECK_THROWS_AS(crossover_at(Chromosome::from_string("10"), Chromosome::from_string("101"), 1),
                      ContractError);
    }
  }

  TEST_CASE("two-point mutation") {
    // Positions are 1-based in the worked examples.
    CHECK(flip_pair(Chromosome::from_string("10111"), 1, 4).to_string() == "11110");
    CHECK(flip_pair(Chromosome::from_string("00010"), 0, 3).to_string() == "10000");

    const Chromosome c = Chromosome::from_string("0110100");
    CHECK(flip_pair(flip_pair(c, 2, 5), 2, 5) == c);

    Rng rng(6);
    for (int i = 0; i < 200; ++i) {
      const Chromosome m = two_point_mutation(c, rng);
      std::size_t diff = 0;
      for (std::size_t k = 0; k < c.size(); ++k) diff += m[k] != c[k] ? 1 : 0;
      CHECK(diff == 2);
      CHECK_FALSE(m.cached_fitness().has_value());
    }
    CHECK_THROWS_AS(flip_pair(c, 1, 1), ContractError);
  }

  TEST_CASE("deterministic improvement moves a misplaced point") {
    // Point 3 (index 2) sits next to point 2 but is clustered with the far group.
    const std::vector<Point> pts{{10, 0}, {0, 0}, {1, 0}, {10, 1}, {10, -1}};
    const Chromosome before = Chromosome::from_string("10111");
    const Chromosome after = deterministic_improvement(pts, before);
    CHECK(after.to_string() == "10011");
    REQUIRE(after.cached_fitness().has_value());
    CHECK(*after.cached_fitness() < chromosome_fitness(pts, before).f);
  }

  TEST_CASE("deterministic improvement leaves fixed points and empty clusters alone") {
    const std::vector<Point> pts{{0, 0}, {0, 1}, {10, 0}, {10, 1}};
    const Chromosome fixed = Chromosome::from_string("0011");
    CHECK(deterministic_improvement(pts, fixed) == fixed);
    const Chromosome empty = Chromosome::from_string("1111");
    const Chromosome out = deterministic_improvement(pts, empty);
    CHECK(out == empty);
    CHECK(std::isinf(*out.cached_fitness()));
  }

  TEST_CASE("deterministic improvement never worsens fitness") {
    Rng rng(555);
    for (int trial = 0; trial < 2000; ++trial) {
      const std::size_t n = 2 + rng.below(40);
      const auto pts = testing::to_points(oracle::random_points(rng, n));
      Genes g(n);
      for (auto& x : g) x = rng.coin() ? 1 : 0;
      const Chromosome c(g);
      const double before = chromosome_fitness(pts, c).f;
      const Chromosome out = deterministic_improvement(pts, c);
      CHECK(*out.cached_fitness() <= before);
      CHECK(*out.cached_fitness() == chromosome_fitness(pts, out).f);

      const auto low = centroid(pts, c.genes(), 0);
      const auto high = centroid(pts, c.genes(), 1);
      if (low && high) {
        // Against the pre-pass centroids, reassignment only shortens distances.
        Chromosome swept = c;
        for (std::size_t i = 0; i < n; ++i) {
          const double dl = euclidean_distance(pts[i], *low);
          const double dh = euclidean_distance(pts[i], *high);
          if (swept[i] == 0 && dh < dl) swept.set(i, 1);
          if (swept[i] == 1 && dl < dh) swept.set(i, 0);
        }
        CHECK(assigned_distance(pts, swept, *low, *high) <= assigned_distance(pts, c, *low, *high));
      }
    }
  }

  TEST_CASE("steady-state replacement") {
    SUBCASE("strictly better offspring replaces the worst") {
      Population pop({with_fitness("01", 1.0), with_fitness("10", 5.0), with_fitness("11", 2.0)});
      CHECK(steady_state_replace(pop, with_fitness("00", 3.0)));
      CHECK(pop[1].to_string() == "00");
      CHECK(pop.max_fitness() == 3.0);
      CHECK(pop.max_index() == 1);
    }
    SUBCASE("a tie with the worst is rejected") {
      Population pop({with_fitness("01", 1.0), with_fitness("10", 5.0)});
      CHECK_FALSE(steady_state_replace(pop, with_fitness("00", 5.0)));
      CHECK(pop[1].to_string() == "10");
    }
    SUBCASE("both offspring evict the two worst, second against the updated maximum") {
      Population pop({with_fitness("0001", 1.0), with_fitness("0010", 5.0), with_fitness("0011", 2.0),
                      with_fitness("0100", 4.0)});
      CHECK(steady_state_replace(pop, with_fitness("1000", 3.0)));
      CHECK(pop.max_index() == 3);
      CHECK(pop.max_fitness() == 4.0);
      CHECK(steady_state_replace(pop, with_fitness("1001", 0.5)));
      CHECK(pop[1].to_string() == "1000");
      CHECK(pop[3].to_string() == "1001");
      CHECK(pop.min_index() == 3);
      CHECK(pop.max_fitness() == 3.0);
    }
    SUBCASE("the lowest index among equal worst chromosomes goes first") {
      Population pop({with_fitness("01", 5.0), with_fitness("10", 1.0), with_fitness("11", 5.0)});
      CHECK(steady_state_replace(pop, with_fitness("00", 2.0)));
      CHECK(pop[0].to_string() == "00");
      CHECK(pop[2].to_string() == "11");
    }
    SUBCASE("an infinite worst is replaced by any finite offspring") {
      Population pop({with_fitness("01", 1.0), with_fitness("00", std::numeric_limits<double>::infinity())});
      CHECK(steady_state_replace(pop, with_fitness("10", 1e9)));
      CHECK_FALSE(steady_state_replace(pop, with_fitness("11", std::numeric_limits<double>::infinity())));
    }
    SUBCASE("offspring without fitness is a contract error") {
      Population pop({with_fitness("01", 1.0), with_fitness("10", 2.0)});
      CHECK_THROWS_AS(steady_state_replace(pop, Chromosome::from_string("11")), ContractError);
    }
  }

  TEST_CASE("run finds the optimum on two separated pairs") {
    const std::vector<oracle::Pt> raw{{0, 0}, {0, 1}, {9, 9}, {9, 10}};
    HgaConfig cfg;
    cfg.population_size = 20;
    cfg.seed = 17;
    const HgaResult r = run_hga(testing::to_points(raw), cfg);
    CHECK(r.best_fitness == oracle::exhaustive_min(raw));
    CHECK(r.best_fitness == 2.0);
    const std::string best = r.best_chromosome.to_string();
    CHECK((best == "0011" || best == "1100"));
  }

  TEST_CASE("doldrum counter stops a frozen run after exactly factor x population generations") {
    // Identical points: every two-sided chromosome has fitness 0, so the
    // minimum can never strictly drop.
    const std::vector<Point> pts(6, Point{1, 1});
    HgaConfig cfg;
    cfg.population_size = 10;
    cfg.doldrum_factor = 2;
    cfg.improvement_enabled = false;
    cfg.mutation_enabled = false;
    cfg.seed = 3;
    const HgaResult r = run_hga(pts, cfg);
    CHECK(r.terminated_by == Termination::kDoldrum);
    CHECK(r.generations_run == 20);
    CHECK(r.min_fitness_trace.size() == 20);
    CHECK(r.best_fitness == 0.0);
  }

  TEST_CASE("generation cap") {
    Rng rng(12);
    const auto pts = testing::to_points(oracle::random_points(rng, 30));
    HgaConfig cfg;
    cfg.population_size = 30;
    cfg.max_generations = 7;
    const HgaResult r = run_hga(pts, cfg);
    CHECK(r.terminated_by == Termination::kCap);
    CHECK(r.generations_run == 7);
  }

  TEST_CASE("runs are reproducible and traces non-increasing") {
    Rng rng(8080);
    const auto pts = testing::to_points(oracle::random_points(rng, 40));
    HgaConfig cfg;
    cfg.population_size = 40;
    cfg.seed = 99;
    std::vector<GenerationRecord> seen;
    const HgaResult a = run_hga(pts, cfg, [&](const GenerationRecord& g) { seen.push_back(g); });
    const HgaResult b = run_hga(pts, cfg);
    CHECK(a.best_chromosome == b.best_chromosome);
    CHECK(a.best_fitness == b.best_fitness);
    CHECK(a.generations_run == b.generations_run);
    CHECK(a.min_fitness_trace == b.min_fitness_trace);
    CHECK(a.max_fitness_trace == b.max_fitness_trace);
    CHECK(a.terminated_by == b.terminated_by);

    REQUIRE(seen.size() == a.generations_run);
    CHECK(seen.front().generation == 1);
    CHECK(seen.back().min_fitness == a.best_fitness);
    for (std::size_t i = 1; i < a.min_fitness_trace.size(); ++i) {
      CHECK(a.min_fitness_trace[i] <= a.min_fitness_trace[i - 1]);
      CHECK(a.max_fitness_trace[i] <= a.max_fitness_trace[i - 1]);
    }
    CHECK(a.best_fitness == chromosome_fitness(pts, a.best_chromosome).f);

    cfg.seed = 100;
    const HgaResult c = run_hga(pts, cfg);
    CHECK(c.min_fitness_trace != a.min_fitness_trace);
  }

  TEST_CASE("refining the initial population is optional") {
    Rng rng(21);
    const auto pts = testing::to_points(oracle::random_points(rng, 25));
    HgaConfig cfg;
    cfg.population_size = 12;
    cfg.improve_initial = true;
    Rng a(1);
    const Population refined = init_population(pts, cfg, a);
    cfg.improve_initial = false;
    Rng b(1);
    const Population plain = init_population(pts, cfg, b);
    for (std::size_t i = 0; i < refined.size(); ++i) {
      CHECK(*refined[i].cached_fitness() <= *plain[i].cached_fitness());
    }
  }
}
