// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "eos/cli.hpp"
#include "test_support.hpp"

using namespace eos;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) note = what;
    pass = pass && ok;
  }
};

const Rational kX(0), kY(1, 3);

const std::vector<std::string> kGammaSuite = {"w", "sum(fin; w, fin(3))", "w*", "sum(fin; fin(2), w*)",
                                              "sum(fin; 1, z, fin(2))"};
const std::vector<std::string> kScatteredSuite = {"sum(w; ; w)", "sum(w; ; sum(w; ; w))", "sum(w*; ; z)",
                                                  "sum(z; ; z)", "sum(fin; w, w*, z)"};

template <class Sys>
std::string failed_checks(const VerifyReport& r) {
  std::string s;
  for (const auto& c : r.checks)
    if (!c.pass) s += c.name + " (" + c.detail + ") ";
  return s;
}

template <class Sys>
Construction<typename Sys::Point> build(const Sys& sys, const typename Sys::Point& x, const typename Sys::Point& y,
                                        const std::string& term, int depth, EpsSchedule sched = EpsSchedule::dyadic(),
                                        std::uint64_t seed = 0) {
  Constructor<Sys> ctor(sys, std::move(sched), depth);
  return ctor.build_scattered(x, y, parse_term(term), std::make_shared<ClassAllocator<Sys>>(sys, seed));
}

Outcome gamma_suite(std::vector<Construction<Rational>>& out, double& seconds) {
  Outcome o;
  Odometer sys;
  auto t0 = Clock::now();
  for (const auto& t : kGammaSuite) {
    auto c = build(sys, kX, kY, t, 10);
    auto r = verify_all(sys, c.family, c.trace, c.target);
    o.require(r.all_pass(), t + ": " + failed_checks<Odometer>(r));
    out.push_back(std::move(c));
  }
  seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  o.require(seconds < 5.0, "runtime " + std::to_string(seconds) + " s");
  return o;
}

Outcome finite_ordinals() {
  Outcome o;
  Odometer sys;
  Constructor<Odometer> ctor(sys, EpsSchedule::dyadic(), 10);
  auto c = ctor.build_orbit_chain(kX, 5);
  auto r = verify_all(sys, c.family, c.trace, c.target);
  o.require(r.all_pass(), "orbit chain: " + failed_checks<Odometer>(r));
  auto lim = limit_order(c.family);
  o.require(lim.linear && lim.elements.size() == 4, "orbit chain interior is not 4");
  o.require(render_term(c.target) == "fin(4)", "orbit chain target " + render_term(c.target));
  for (const char* t : {"1", "fin(4)", "fin(9)"}) {
    bool rejected = false;
    try {
      ctor.build_scattered(kX, kY, parse_term(t), std::make_shared<ClassAllocator<Odometer>>(sys));
    } catch (const PreconditionError&) {
      rejected = true;
    }
    o.require(rejected, std::string("finite target ") + t + " accepted across classes");
  }
  auto via = ctor.build_scattered(kX, Rational(5), parse_term("fin(4)"), std::make_shared<ClassAllocator<Odometer>>(sys));
  o.require(via.family.stages.front().points == c.family.stages.front().points, "finite routing differs from orbit chain");
  return o;
}

Outcome scattered_suite(std::vector<Construction<Rational>>& out) {
  Outcome o;
  Odometer sys;
  for (const auto& t : kScatteredSuite) {
    auto c = build(sys, kX, kY, t, 6);
    auto r = verify_all(sys, c.family, c.trace, c.target);
    o.require(r.all_pass(), t + ": " + failed_checks<Odometer>(r));
    NormalizedSum ns = normalize_sum(c.target);
    for (std::size_t n = 0; n < c.family.stages.size(); ++n) {
      const auto& pts = c.family.stages[n].points;
      std::set<std::int64_t> blocks;
      for (std::size_t i = 1; i + 1 < pts.size(); ++i) blocks.insert(c.trace.addresses.at(pts[i]).front());
      std::size_t want = ns.index == IndexKind::Fin ? ns.head.size() : n + 1;
      o.require(blocks.size() == want, t + ": stage " + std::to_string(n + 1) + " has " +
                                           std::to_string(blocks.size()) + " blocks");
      std::unordered_set<Rational> support(pts.begin(), pts.end());
      o.require(support.size() == c.trace.predicted_sizes.at(n),
                t + ": stage " + std::to_string(n + 1) + " support " + std::to_string(support.size()) +
                    " vs predicted " + std::to_string(c.trace.predicted_sizes.at(n)));
    }
    out.push_back(std::move(c));
  }
  return o;
}

Rational random_odd_point(std::mt19937_64& rng) {
  static const std::int64_t dens[] = {1, 3, 5, 7, 9, 11, 15, 21, 25, 27};
  return Rational(static_cast<std::int64_t>(rng() % 4001) - 2000, dens[rng() % 10]);
}

Outcome fuzz(std::size_t& mutation_flips, std::size_t& mutation_trials) {
  Outcome o;
  Odometer sys;
  std::mt19937_64 rng(20241015);
  std::vector<Construction<Rational>> corpus;
  int built = 0;
  while (built < 100) {
    OrderTerm t = eos::testing::random_rank2_term(rng);
    if (t.is_finite()) continue;
    if (cnf_compare(vd_rank(t), OrdinalCNF::finite(2)) == Ordering::GT) continue;
    int depth = 2 + static_cast<int>(rng() % 3);
    std::vector<Rational> eps{Rational(1, 1 + static_cast<std::int64_t>(rng() % 4))};
    for (int n = 1; n < depth; ++n) {
      auto k = static_cast<std::int64_t>(1 + rng() % 3);
      eps.push_back(eps.back() * Rational(k, k + 1 + static_cast<std::int64_t>(rng() % 2)));
    }
    ClassAllocator<Odometer> ends(sys, rng() % 8);
    Rational x = sys.iterate(ends.fresh(), static_cast<std::int64_t>(rng() % 21) - 10);
    Rational y = sys.iterate(ends.fresh(), static_cast<std::int64_t>(rng() % 21) - 10);
    Constructor<Odometer> ctor(sys, EpsSchedule::list(eps), depth);
    auto c = ctor.build_scattered(x, y, t, std::make_shared<ClassAllocator<Odometer>>(sys, ends.issued() + 8));
    auto r = verify_all(sys, c.family, c.trace, c.target);
    o.require(r.all_pass(), render_term(t) + ": " + failed_checks<Odometer>(r));
    corpus.push_back(std::move(c));
    ++built;
  }
  mutation_flips = 0;
  mutation_trials = 500;
  for (std::size_t i = 0; i < mutation_trials; ++i) {
    auto m = corpus[rng() % corpus.size()];
    auto& st = m.family.stages[rng() % m.family.stages.size()].points;
    std::size_t pos = rng() % st.size();
    Rational orig = st[pos];
    do st[pos] = rng() % 2 ? random_odd_point(rng) : orig + Rational(std::int64_t{1} << (rng() % 30), 3);
    while (st[pos] == orig);
    if (!verify_all(sys, m.family, m.trace, m.target).all_pass()) ++mutation_flips;
  }
  o.require(mutation_flips * 100 >= mutation_trials * 99,
            "mutations caught " + std::to_string(mutation_flips) + "/" + std::to_string(mutation_trials));
  return o;
}

Outcome oracles(const std::vector<Construction<Rational>>& families, std::uint64_t& pairs) {
  Outcome o;
  Odometer sys;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    Rational from = random_odd_point(rng), to = random_odd_point(rng);
    Rational eps = i % 2 ? dyadic(static_cast<int>(rng() % 14))
                         : Rational(1, 1 + static_cast<std::int64_t>(rng() % 5000));
    auto min_h = static_cast<std::int64_t>(rng() % 500);
    std::int64_t fast = sys.hit_time(from, to, eps, min_h);
    std::int64_t slow = eos::testing::brute_hit_time(from, to, eps, min_h);
    o.require(fast == slow, "hit_time(" + from.to_string() + ", " + to.to_string() + ", " + eps.to_string() + ", " +
                                std::to_string(min_h) + ") = " + std::to_string(fast) + ", brute force " +
                                std::to_string(slow));
  }
  // Pairwise appearance comparison over every stage, against limit_order.
  pairs = 0;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto& fam = families[f].family;
    auto lim = limit_order(fam);
    if (!lim.linear) {
      o.require(false, kScatteredSuite[f] + ": limit order not linear");
      continue;
    }
    std::unordered_map<Rational, std::size_t> id;
    std::vector<Rational> elems;
    for (const auto& st : fam.stages)
      for (std::size_t i = 1; i + 1 < st.points.size(); ++i)
        if (id.emplace(st.points[i], elems.size()).second) elems.push_back(st.points[i]);
    o.require(elems.size() == lim.elements.size(), kScatteredSuite[f] + ": element count differs");
    std::vector<std::vector<std::int32_t>> pos(fam.stages.size(), std::vector<std::int32_t>(elems.size(), -1));
    for (std::size_t s = 0; s < fam.stages.size(); ++s) {
      const auto& pts = fam.stages[s].points;
      for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        auto& slot = pos[s][id.at(pts[i])];
        if (slot < 0) slot = static_cast<std::int32_t>(i);
      }
    }
    std::vector<std::size_t> lim_pos(elems.size());
    for (std::size_t a = 0; a < elems.size(); ++a) lim_pos[a] = lim.position(elems[a]);
    bool ok = true;
    for (std::size_t a = 0; a < elems.size() && ok; ++a)
      for (std::size_t b = a + 1; b < elems.size() && ok; ++b) {
        int verdict = 0;
        for (std::size_t s = 0; s < pos.size(); ++s) {
          if (pos[s][a] < 0 || pos[s][b] < 0) continue;
          int v = pos[s][a] < pos[s][b] ? -1 : 1;
          if (verdict && v != verdict) verdict = 2;
          if (verdict != 2) verdict = v;
        }
        ++pairs;
        int expect = lim_pos[a] < lim_pos[b] ? -1 : 1;
        if (verdict != expect) {
          ok = false;
          o.require(false, kScatteredSuite[f] + ": " + elems[a].to_string() + " vs " + elems[b].to_string());
        }
      }
  }
  return o;
}

Outcome transport(const std::vector<Construction<Rational>>& gamma) {
  Outcome o;
  Odometer sys;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const auto& c = gamma[i];
    auto img = transport_family(sys, c, Translation{Rational(1, 5)});
    auto r = verify_all(sys, img.family, img.trace, img.target);
    o.require(r.all_pass(), kGammaSuite[i] + ": " + failed_checks<Odometer>(r));
    o.require(img.family.epsilons == c.family.epsilons, kGammaSuite[i] + ": schedule changed");
    o.require(img.family.x == Rational(1, 5) && img.family.y == Rational(8, 15), kGammaSuite[i] + ": endpoints");
    auto a = limit_order(c.family), b = limit_order(img.family);
    bool same = a.elements.size() == b.elements.size();
    for (std::size_t k = 0; same && k < a.elements.size(); ++k)
      same = c.trace.addresses.at(a.elements[k]) == img.trace.addresses.at(b.elements[k]);
    o.require(same, kGammaSuite[i] + ": address order differs");
  }
  return o;
}

Outcome alpha_structures() {
  Outcome o;
  Odometer sys;
  auto alloc = std::make_shared<ClassAllocator<Odometer>>(sys);
  auto root = build_alpha<Odometer>(OrdinalCNF::parse("w+1"), alloc);
  std::vector<Rational> seeds;
  // Spread over several branches and depths: child i of the root has rank w,
  // its children have finite ranks i + 2.
  for (std::uint64_t i = 0; seeds.size() < 50; ++i) {
    auto branch = root.child(i % 4);
    auto leafward = branch.child(i / 4 % 3);
    while (!leafward.is_leaf()) leafward = leafward.child(i % 2);
    seeds.push_back(leafward.seed(i / 12));
  }
  std::unordered_set<Rational> distinct(seeds.begin(), seeds.end());
  o.require(distinct.size() == seeds.size(), "seed reused");
  for (std::size_t a = 0; a < seeds.size(); ++a)
    for (std::size_t b = a + 1; b < seeds.size(); ++b)
      o.require(!sys.same_class(seeds[a], seeds[b]), seeds[a].to_string() + " ~ " + seeds[b].to_string());
  std::vector<Rational> removed(seeds.begin(), seeds.begin() + 10);
  removed.push_back(Rational(0));
  auto cut = root.minus(removed);
  for (std::uint64_t i = 0; i < 60; ++i) {
    auto branch = cut.child(i % 4);
    auto leafward = branch.child(i / 4 % 3);
    while (!leafward.is_leaf()) leafward = leafward.child(i % 2);
    Rational s = leafward.seed(i / 12);
    for (const auto& r : removed) o.require(!sys.same_class(s, r), "removed class " + r.to_string() + " returned");
  }
  return o;
}

Outcome ranks() {
  Outcome o;
  auto rank_of = [](const std::string& t) {
    std::ostringstream out, err;
    int code = cli::cmd_rank(t, out, err);
    return code == 0 ? out.str() : "exit " + std::to_string(code);
  };
  o.require(rank_of("w") == "1\n", "rank(w) = " + rank_of("w"));
  std::string power = "w";
  for (int n = 1; n <= 5; ++n) {
    o.require(rank_of(power) == std::to_string(n) + "\n", "rank(" + power + ") = " + rank_of(power));
    power = "sum(w; ; " + power + ")";
  }
  o.require(rank_of("sum(w; ; ^0)") == "w\n", "rank of the tower = " + rank_of("sum(w; ; ^0)"));
  o.require(rank_of("sum(w; w, sum(w; ; w); ^3)") == "w\n", "rank of the shifted tower");
  o.require(rank_of("1") == "0\n" && rank_of("0") == "0\n", "finite ranks");
  return o;
}

Outcome rotation_suite(double& seconds) {
  Outcome o;
  Rotation sys("golden");
  RotationPoint x{Rational(0), 0}, y{Rational(1, 3), 0};
  auto t0 = Clock::now();
  for (const auto& t : kGammaSuite) {
    try {
      auto c = build(sys, x, y, t, 6);
      auto r = verify_all(sys, c.family, c.trace, c.target);
      o.require(r.all_pass(), t + ": " + failed_checks<Rotation>(r));
    } catch (const PrecisionExhausted& e) {
      o.require(false, t + ": precision exhausted: " + e.what());
    }
  }
  seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return o;
}

bool report(int n, const std::string& label, const Outcome& o, const std::string& extra = "") {
  std::cout << "criterion " << n << " [" << label << "]: " << (o.pass ? "PASS" : "FAIL");
  if (!extra.empty()) std::cout << "  " << extra;
  if (!o.pass) std::cout << "  first failure: " << o.note;
  std::cout << std::endl;
  return o.pass;
}

}  // namespace

int main() {
  bool all = true;
  std::vector<Construction<Rational>> gamma, scattered;
  double gamma_s = 0;
  Outcome c1 = gamma_suite(gamma, gamma_s);
  all &= report(1, "gamma suite, odometer, N=10", c1, "time " + std::to_string(gamma_s) + " s");
  all &= report(2, "finite ordinals", finite_ordinals());
  all &= report(3, "recursive scattered suite, N=6", scattered_suite(scattered));
  std::size_t flips = 0, trials = 0;
  Outcome c4 = fuzz(flips, trials);
  all &= report(4, "fuzz and mutation", c4, "mutations caught " + std::to_string(flips) + "/" + std::to_string(trials));
  std::uint64_t pairs = 0;
  Outcome c5 = oracles(scattered, pairs);
  all &= report(5, "hit-time and limit-order oracles", c5, std::to_string(pairs) + " pairs compared");
  all &= report(6, "conjugacy transport by 1/5", transport(gamma));
  all &= report(7, "alpha-structures", alpha_structures());
  all &= report(8, "rank values", ranks());
  double rot_s = 0;
  Outcome c9 = rotation_suite(rot_s);
  all &= report(9, "golden rotation, N=6", c9, "time " + std::to_string(rot_s) + " s");
  std::cout << (all ? "all criteria pass" : "some criteria FAIL") << std::endl;
  return all ? 0 : 1;
}
