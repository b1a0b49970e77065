// One line per acceptance criterion: PASS/FAIL, wall time, detail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "qmk/algebroid.hpp"
#include "random.hpp"

using namespace qmk;
using qmk::testing::Fixture;
using qmk::testing::load_chart;
using qmk::testing::load_q;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;  // 0: no bound
  std::function<Outcome()> run;
};

void fail(Outcome& o, const std::string& why) {
  if (o.ok) o.detail = why;
  o.ok = false;
}

int sign(bool odd) { return odd ? -1 : 1; }

std::vector<Fixture> identity_fixtures() {
  std::vector<Fixture> out;
  for (const char* n : {"tangent", "ce2", "abelian", "model_family", "model_central", "mixed"})
    out.push_back({n, load_q(n)});
  return out;
}

std::vector<Fixture> degree_one_fixtures() {
  std::vector<Fixture> out;
  for (const char* n : {"tangent", "ce2", "abelian", "action", "ce3_base"}) out.push_back({n, load_q(n)});
  return out;
}

Outcome identity_suite() {
  Outcome o;
  std::size_t instances = 0;
  for (const auto& f : identity_fixtures()) {
    HigherAlgebroid a(f.q);
    auto samples = basis_samples(a);
    samples.tuples = random_samples(a, 60, 1);
    auto report = verify_two_layer(a, samples);
    for (const auto& r : report.results) {
      instances += r.instances;
      if (!r.ok) fail(o, f.name + ": " + std::string(identity_name(r.identity)) + " has a nonzero residual");
      if (r.instances == 0) fail(o, f.name + ": " + std::string(identity_name(r.identity)) + " never evaluated");
    }
  }
  if (o.ok) o.detail = std::to_string(identity_fixtures().size()) + " charts, " + std::to_string(instances) + " instances";
  return o;
}

Outcome axioms_vs_q2() {
  Outcome o;
  std::vector<Fixture> charts = degree_one_fixtures();
  charts.push_back({"ce3_corrupt", load_q("ce3_corrupt")});
  charts.push_back({"action/Qbad", load_chart("action").field("Qbad")});
  int homological = 0;
  for (const auto& f : charts) {
    const auto report = verify_algebroid_axioms(AlgebroidChart(f.q));
    const bool q2 = is_homological(f.q).homological;
    homological += q2;
    if (report.axioms_ok() != q2) fail(o, f.name + ": axioms and Q2 disagree");
  }
  if (homological == 0 || homological == static_cast<int>(charts.size()))
    fail(o, "both directions need a positive and a negative chart");
  if (o.ok)
    o.detail = std::to_string(charts.size()) + " charts, " +
               std::to_string(charts.size() - homological) + " non-homological";
  return o;
}

bool compare_golden(const std::string& actual, const std::string& file, Outcome& o) {
  const std::string golden = qmk::testing::read_file(qmk::testing::golden_path(file));
  if (actual == golden) return true;
  std::istringstream a(actual), g(golden);
  std::string la, lg;
  for (int line = 1;; ++line) {
    const bool ha = static_cast<bool>(std::getline(a, la)), hg = static_cast<bool>(std::getline(g, lg));
    if (!ha && !hg) break;
    if (!ha || !hg || la != lg) {
      fail(o, file + " line " + std::to_string(line) + ": got '" + la + "'");
      break;
    }
  }
  return false;
}

Outcome golden_tables() {
  Outcome o;
  HigherAlgebroid a(load_q("model_general"), Validation::shape_only);
  const auto tables = two_layer(a);
  bool ok = compare_golden(qmk::testing::render_model_tables(tables, linfty_from_tables(tables)),
                           "model_tables.txt", o);
  ok = compare_golden(qmk::testing::render_model_translaw(), "model_translaw.txt", o) && ok;
  if (ok) o.detail = "model_tables.txt, model_translaw.txt byte-identical";
  return o;
}

Outcome recovery() {
  Outcome o;
  auto fixtures = qmk::testing::homological_fixtures();
  for (const auto& f : fixtures) {
    HigherAlgebroid a(f.q);
    if (a.degree() > 2) continue;
    if (recover_Q(two_layer(a)) != f.q) fail(o, f.name + ": recovered field differs");
  }
  const auto general = load_q("model_general");
  const auto t = two_layer(HigherAlgebroid(general, Validation::shape_only));
  if (recover_Q(t, {.require_homological = false}) != general) fail(o, "model_general: recovered field differs");
  if (o.ok) o.detail = std::to_string(fixtures.size() + 1) + " charts incl. the 16-scalar model";
  return o;
}

Outcome anchors() {
  Outcome o;
  std::size_t checked = 0, charts = 0;
  auto fixtures = qmk::testing::homological_fixtures();
  fixtures.push_back({"action", load_q("action")});
  for (const auto& f : fixtures) {
    HigherAlgebroid a(f.q);
    if (a.base().empty()) continue;
    ++charts;
    const auto r = anchors_agree(a);
    checked += r.checked;
    if (!r.agree) fail(o, f.name + ": anchors differ");
  }
  if (charts == 0 || checked == 0) fail(o, "no chart with a base was checked");
  if (o.ok) o.detail = std::to_string(charts) + " charts, " + std::to_string(checked) + " sections";
  return o;
}

Outcome degree_one() {
  Outcome o;
  std::size_t pairs = 0;
  for (const auto& f : degree_one_fixtures()) {
    HigherAlgebroid a(f.q);
    const NegativeBasis basis(a.context());
    for (const auto& b : basis.elements())
      if (!derived_d(a, b.field).is_zero()) fail(o, f.name + ": d " + b.label + " != 0");
    for (const auto& u : basis.elements())
      for (const auto& v : basis.elements()) {
        ++pairs;
        const auto uv = derived_bracket(a, u.field, v.field);
        const auto vu = derived_bracket(a, v.field, u.field);
        if (uv != sign(is_odd(u.parity) && is_odd(v.parity)) * vu)
          fail(o, f.name + ": {" + u.label + "," + v.label + "} not symmetric");
      }
    SampleSet samples;
    for (const auto& b : basis.elements()) samples.fields.push_back(b.field);
    const Identity jac[] = {Identity::jac};
    if (!verify_two_layer(a, samples, jac).ok()) fail(o, f.name + ": jac fails");
  }
  if (o.ok) o.detail = std::to_string(degree_one_fixtures().size()) + " charts, " + std::to_string(pairs) + " pairs";
  return o;
}

Outcome tautological() {
  Outcome o;
  int seen[2] = {0, 0};
  for (const char* name : {"mixed", "ce2", "nonhom", "ce3_corrupt"}) {
    const auto q = load_q(name);
    const auto shifted = shifted_tangent_context(q.context());
    const bool related = check_f_related(tautological_map(q, shifted), q, de_rham_field(shifted)).related;
    const bool homological = is_homological(q).homological;
    ++seen[homological];
    if (related != homological) fail(o, std::string(name) + ": relatedness and Q2 disagree");
  }
  if (o.ok) o.detail = std::to_string(seen[1]) + " homological, " + std::to_string(seen[0]) + " not";
  return o;
}

Outcome kernel_properties() {
  Outcome o;
  const auto ctx = GradedContext::make({{"x", Parity::even, 0},
                                        {"y", Parity::even, 1},
                                        {"xi", Parity::odd, 1},
                                        {"eta", Parity::odd, 2},
                                        {"z", Parity::even, 2}});
  constexpr unsigned long n = 1000;
  auto parity_of = [](const Polynomial& f) { return parity_weight(f)->parity; };
  auto odd_pair = [](Parity a, Parity b) { return is_odd(a) && is_odd(b); };
  std::size_t failures = 0;
  for (unsigned long s = 0; s < n; ++s) {
    testing::RandomAlgebra r(ctx, s);
    const auto f = r.homogeneous(), g = r.homogeneous();
    if (f * g != sign(odd_pair(parity_of(f), parity_of(g))) * (g * f)) ++failures;
    const auto i = static_cast<std::size_t>(r.uniform(0, 4));
    if (partial_derivative(f * g, i) !=
        partial_derivative(f, i) * g +
            sign(odd_pair((*ctx)[i].parity, parity_of(f))) * (f * partial_derivative(g, i)))
      ++failures;
    const auto fg = f * g;
    if (!fg.is_zero() && parity_weight(fg)->weight != parity_weight(f)->weight + parity_weight(g)->weight)
      ++failures;
    const Parity px = r.uniform(0, 1) ? Parity::odd : Parity::even;
    const Parity py = r.uniform(0, 1) ? Parity::odd : Parity::even;
    const Parity pz = r.uniform(0, 1) ? Parity::odd : Parity::even;
    const auto x = r.field(px, 1), y = r.field(py, 1), z = r.field(pz, 1);
    if (commutator(x, commutator(y, z)) !=
        commutator(commutator(x, y), z) + sign(odd_pair(px, py)) * commutator(y, commutator(x, z)))
      ++failures;
  }
  if (failures) fail(o, std::to_string(failures) + " failing instances");
  else o.detail = "4 properties x " + std::to_string(n) + " seeds";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "identity suite on fixture charts", 10, identity_suite},
      {2, "algebroid axioms iff Q2 = 0", 1, axioms_vs_q2},
      {3, "model tables match golden files", 1, golden_tables},
      {4, "Q recovered from its tables", 5, recovery},
      {5, "algebraic and geometric anchors agree", 0, anchors},
      {6, "degree-one degeneration", 0, degree_one},
      {7, "tautological map related iff Q2 = 0", 0, tautological},
      {8, "kernel property suites", 30, kernel_properties},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds)
      fail(o, "took longer than " + std::to_string(static_cast<int>(c.limit_seconds)) + " s");
    failed += !o.ok;
    std::printf("%s [%d] %-40s %8.3f s  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
