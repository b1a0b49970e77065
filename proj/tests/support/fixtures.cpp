#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qmk::testing {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string data_path(const std::string& name) { return std::string(QMK_TEST_DIR) + "/data/" + name; }
std::string golden_path(const std::string& name) {
  return std::string(QMK_TEST_DIR) + "/golden/" + name;
}

ChartDocument load_chart(const std::string& name) {
  return parse_document(read_file(data_path(name + ".qmk")));
}

VectorField load_q(const std::string& name) { return load_chart(name).field("Q"); }

std::vector<Fixture> homological_fixtures() {
  std::vector<Fixture> out;
  for (const char* name : {"tangent", "ce2", "abelian", "model_family", "model_central", "mixed",
                           "toy", "ce3_base"})
    out.push_back({name, load_q(name)});
  return out;
}

Polynomial poly(const ContextPtr& ctx, const std::string& text) {
  return parse_expression(text, ctx);
}

std::string short_label(const BasisElement& b) {
  const std::string& l = b.label;
  const auto pos = l.find("d_");
  if (pos == 0) return "e_" + l.substr(2);
  // <m>_d_<c> with a single factor in the models rendered here
  return "e^" + l.substr(0, pos - 1) + "_" + l.substr(pos + 2);
}

namespace {

// Each term with the absolute value of its rational factor.
std::string unsigned_form(const Polynomial& p) {
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    out += to_string(Polynomial::term(p.context(), m, abs(c)));
  }
  return p.term_count() > 1 ? "(" + out + ")" : out;
}

std::string unsigned_combination(const NegativeBasis& basis, const Coefficients& c) {
  std::string out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += unsigned_form(c[k]) + " " + short_label(basis[k]);
  }
  return out.empty() ? "0" : out;
}

std::string signed_combination(const NegativeBasis& basis, const Coefficients& c) {
  std::string out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k].is_zero()) continue;
    std::string coeff = to_string(c[k]);
    if (coeff == "1") coeff = "";
    else if (coeff == "-1") coeff = "-";
    else coeff += "*";
    if (!out.empty()) out += " + ";
    out += coeff + short_label(basis[k]);
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::string render_model_tables(const TwoLayerStructure& t, const LInftyStructure& l) {
  const NegativeBasis& basis = t.basis;
  const ContextPtr& ctx = t.context();
  auto idx = [&](const std::string& label) { return *basis.find(label); };
  const std::vector<std::string> ys{"y1", "y2", "y3"};
  std::vector<std::string> out{"# commutators (signed)"};
  auto comm = [&](const std::string& a, const std::string& b) {
    const std::size_t i = idx(a), j = idx(b);
    out.push_back("[" + short_label(basis[i]) + ", " + short_label(basis[j]) +
                  "] = " + signed_combination(basis, t.bracket[i][j]));
  };
  for (auto& i : ys)
    for (auto& j : ys) comm("d_" + i, "d_" + j);
  for (auto& i : ys)
    for (auto& j : ys) comm("d_" + i, j + "_d_z1");
  for (auto& i : ys)
    for (auto& j : ys) comm(i + "_d_z1", j + "_d_z1");
  for (auto& i : ys) comm("d_" + i, "d_z1");
  for (auto& i : ys) comm(i + "_d_z1", "d_z1");
  comm("d_z1", "d_z1");

  out.push_back("# differential");
  auto diff = [&](const std::string& a) {
    const std::size_t i = idx(a);
    out.push_back("d " + short_label(basis[i]) + " = " +
                  unsigned_combination(basis, t.differential[i]));
  };
  for (auto& i : ys) diff("d_" + i);
  for (auto& i : ys) diff(i + "_d_z1");
  diff("d_z1");

  out.push_back("# new bracket");
  auto nb = [&](const std::string& a, const std::string& b) {
    const std::size_t i = idx(a), j = idx(b);
    out.push_back("{" + short_label(basis[i]) + ", " + short_label(basis[j]) +
                  "} = " + unsigned_combination(basis, t.derived[i][j]));
  };
  for (auto& i : ys)
    for (auto& j : ys) nb("d_" + i, "d_" + j);
  for (auto& i : ys)
    for (auto& j : ys) nb("d_" + i, j + "_d_z1");
  for (auto& i : ys) nb("d_" + i, "d_z1");
  nb("d_z1", "d_z1");

  out.push_back("# L-infinity brackets on classes");
  for (const auto& [key, cls] : l.brackets) {
    std::string args;
    for (std::size_t c : key) args += (args.empty() ? "e_" : ", e_") + (*ctx)[c].name;
    Coefficients coeffs = basis.zero();
    for (std::size_t c : l.generators) coeffs[*basis.constant_field(c)] = cls[c];
    out.push_back("(" + args + ") = " + unsigned_combination(basis, coeffs));
  }

  std::string text;
  for (const auto& line : out) text += line + "\n";
  return text;
}

std::string render_model_translaw() {
  // y^i = y^{i'} T_{i'}^i,  z = 2 z' + 1/2 y^{i'} y^{j'} T_{j'i'}
  const Rational t[3][3] = {{1, 2, 0}, {0, 1, 1}, {1, 0, 1}};
  const Rational tz = 2;
  auto t_anti = [](int jp, int ip) -> Rational {
    static const Rational upper[3][3] = {{0, 0, 0}, {3, 0, 0}, {-1, 5, 0}};
    if (jp == ip) return 0;
    return jp > ip ? upper[jp][ip] : Rational(-upper[ip][jp]);
  };
  // inverse through the adjugate
  Rational det = 0;
  Rational inv[3][3];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const int r1 = (c + 1) % 3, r2 = (c + 2) % 3, c1 = (r + 1) % 3, c2 = (r + 2) % 3;
      inv[r][c] = t[r1][c1] * t[r2][c2] - t[r1][c2] * t[r2][c1];
    }
  for (int c = 0; c < 3; ++c) det += t[0][c] * inv[c][0];
  for (auto& row : inv)
    for (auto& x : row) x /= det;

  auto coords = [](const std::string& suffix) {
    std::vector<Coordinate> v;
    for (const char* y : {"y1", "y2", "y3"}) v.push_back({y + suffix, Parity::odd, 1});
    v.push_back({"z1" + suffix, Parity::even, 2});
    return GradedContext::make(v);
  };
  const ContextPtr plain = coords("");
  const ContextPtr primed = coords("p");

  Substitution plain_in_primed(plain, primed);
  for (int i = 0; i < 3; ++i) {
    Polynomial img(primed);
    for (int ip = 0; ip < 3; ++ip) img += Polynomial::variable(primed, ip) * t[ip][i];
    plain_in_primed.assign(i, img);
  }
  Polynomial quad(primed);
  for (int ip = 0; ip < 3; ++ip)
    for (int jp = 0; jp < 3; ++jp)
      quad += Polynomial::variable(primed, ip) * Polynomial::variable(primed, jp) *
              (t_anti(jp, ip) / 2);
  plain_in_primed.assign(3, Polynomial::variable(primed, 3) * tz + quad);

  Substitution primed_in_plain(primed, plain);
  for (int jp = 0; jp < 3; ++jp) {
    Polynomial img(plain);
    for (int j = 0; j < 3; ++j) img += Polynomial::variable(plain, j) * inv[j][jp];
    primed_in_plain.assign(jp, img);
  }
  primed_in_plain.assign(3, Polynomial::variable(plain, 3));  // placeholder for the quadratic part
  const Polynomial quad_plain = substitute(quad, primed_in_plain);
  primed_in_plain.assign(3, (Polynomial::variable(plain, 3) - quad_plain) * (1 / tz));

  const CoordinateChange change(primed_in_plain, plain_in_primed);
  const NegativeBasis from(primed), to(plain);
  std::string out = "# primed basis in the unprimed chart (unsigned)\n";
  std::vector<std::size_t> order;
  for (const char* l : {"d_y1p", "d_y2p", "d_y3p", "d_z1p", "y1p_d_z1p", "y2p_d_z1p", "y3p_d_z1p"})
    order.push_back(*from.find(l));
  for (std::size_t i : order) {
    const Coefficients c = to.expand(pushforward(from[i].field, change));
    std::string line;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k].is_zero()) continue;
      const Rational v = abs(c[k].constant_term());
      if (!line.empty()) line += " + ";
      line += (v == 1 ? "" : v.get_str() + "*") + short_label(to[k]);
    }
    out += short_label(from[i]) + " = " + (line.empty() ? "0" : line) + "\n";
  }
  return out;
}

}  // namespace qmk::testing
