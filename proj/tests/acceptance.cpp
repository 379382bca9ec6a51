// Runs the seeded property suites at full size and prints one PASS/FAIL line
// per acceptance criterion. Exit status is nonzero when any criterion fails.

#include "funkspace/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using funkspace::verify::PropertyResult;
using funkspace::verify::SuiteOptions;

constexpr int kTrials = 1000;
constexpr std::uint64_t kSeed = 42;

class Runner {
 public:
  const PropertyResult& get(const std::string& name) {
    auto it = cache_.find(name);
    if (it == cache_.end()) {
      SuiteOptions o;
      o.trials = kTrials;
      o.seed = kSeed;
      it = cache_.emplace(name, funkspace::verify::run_property(name, o)).first;
    }
    return it->second;
  }

 private:
  std::map<std::string, PropertyResult> cache_;
};

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  // Property passed, ran at least `min_checks` checks and stayed within `tol`.
  void require(const PropertyResult& r, std::int64_t min_checks, double tol) {
    const bool ok = r.passed() && r.checks >= min_checks && r.worst <= tol;
    pass = pass && ok;
    note << ' ' << r.name << "[checks=" << r.checks << " worst=" << r.worst << (ok ? "" : " FAILED") << ']';
  }
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    note << ' ' << what << (ok ? "" : " FAILED");
  }
};

bool witness_found(const PropertyResult& r) { return r.passed() && !r.witness.is_null(); }

}  // namespace

int main() {
  Runner run;
  struct Criterion {
    const char* label;
    std::function<void(Outcome&)> check;
  };
  const std::vector<Criterion> criteria = {
      {"klein identity", [&](Outcome& o) { o.require(run.get("klein_identity"), 9, 1e-10); }},
      {"F1 = F2 on polytopes and ellipsoids",
       [&](Outcome& o) {
         o.require(run.get("forms_agree_polytope"), 1000, 1e-9);
         o.require(run.get("forms_agree_ellipsoid"), 300, 1e-6);
       }},
      {"three representations",
       [&](Outcome& o) {
         o.require(run.get("three_representations"), 100, 1e-6);
         o.require(run.get("straight_path_length"), 1000, 1e-8);
       }},
      {"triangle inequalities",
       [&](Outcome& o) {
         for (const char* n : {"triangle_f1", "triangle_f2", "triangle_hilbert", "triangle_wp_f2_raw",
                               "triangle_wp_hilbert"}) {
           o.require(run.get(n), 10000, 1e-9);
         }
       }},
      {"square additivity",
       [&](Outcome& o) {
         const auto& r = run.get("square_additivity");
         o.require(r, 2, 1e-12);
         for (const char* f : {"f1", "f2"}) {
           const auto& v = r.details.at("values").at(f);
           o.require(std::abs(v.at("xy").get<double>() - std::log(1.5)) <= 1e-12 &&
                         std::abs(v.at("yz").get<double>() - std::log(2.0)) <= 1e-12 &&
                         std::abs(v.at("xz").get<double>() - std::log(3.0)) <= 1e-12,
                     std::string(f) + " values log 1.5, log 2, log 3");
         }
       }},
      {"derivative formulas", [&](Outcome& o) { o.require(run.get("derivative_formulas"), 1000, 1e-6); }},
      {"convexity of F(x, s(t))",
       [&](Outcome& o) {
         o.require(run.get("convexity_forward"), 1000, 1e-9);
         o.require(witness_found(run.get("convexity_reversed_witness")), "reversed non-convexity witness");
       }},
      {"Busemann midpoint dichotomy",
       [&](Outcome& o) {
         o.require(run.get("busemann_disk"), 1000, 1e-9);
         const auto& sq = run.get("busemann_square_witness");
         o.require(witness_found(sq) && sq.witness.at("excess").get<double>() > 1e-6, "square witness");
       }},
      {"model comparison chain",
       [&](Outcome& o) {
         o.require(run.get("chain_phi1_le_f2"), 1000, 1e-9);
         o.require(run.get("chain_f2_le_length_tilde"), 100 * 1000, 1e-8);
         o.require(run.get("chain_f1est"), 1000, 1e-8);
         o.require(run.get("perpendicular_collapse"), 1000, 1e-10);
       }},
      {"invariance",
       [&](Outcome& o) {
         o.require(run.get("affine_invariance"), 1000, 1e-9);
         o.require(run.get("isometry_invariance"), 1000, 1e-9);
       }},
      {"deterministic reports",
       [&](Outcome& o) {
         SuiteOptions opts;
         opts.suite = "all";
         opts.trials = 20;
         opts.seed = 7;
         const auto a = funkspace::verify::run_suite(opts).to_json().dump(2);
         const auto b = funkspace::verify::run_suite(opts).to_json().dump(2);
         o.require(a == b, "two runs byte-identical (" + std::to_string(a.size()) + " bytes)");
       }},
  };

  int failed = 0;
  int index = 1;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      c.check(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("error: ") + e.what());
    }
    std::printf("%s criterion %d (%s):%s\n", o.pass ? "PASS" : "FAIL", index++, c.label, o.note.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
