#include "qmk/cli.hpp"

#include <json.hpp>

#include "qmk/algebroid.hpp"
#include "qmk/document.hpp"

namespace qmk {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Output {
  bool ok = true;
  std::string text;
  json data = json::object();
};

json field_json(const VectorField& x) {
  json out = json::object();
  for (std::size_t c = 0; c < x.size(); ++c)
    if (!x[c].is_zero()) out[(*x.context())[c].name] = to_string(x[c]);
  return out;
}

const std::string& arg(const std::vector<std::string>& args, std::size_t i, const char* what) {
  if (i >= args.size()) throw UsageError(std::string("missing ") + what + " argument");
  return args[i];
}

void expect_args(const std::vector<std::string>& args, std::size_t n) {
  if (args.size() > n) throw UsageError("unexpected argument '" + args[n] + "'");
}

Output check_q2(const ChartDocument& doc, const std::vector<std::string>& args) {
  expect_args(args, 1);
  const VectorField& q = doc.field(arg(args, 0, "field"));
  const HomologicalCheck h = is_homological(q);
  Output out;
  out.ok = h.homological;
  out.data["homological"] = h.homological;
  out.data["square"] = field_json(h.square);
  if (h.homological) {
    out.text = "Q2 OK\n";
  } else {
    const std::string& name = (*q.context())[*h.witness].name;
    out.text = "Q2 FAIL " + name + ": " + to_string(h.square[*h.witness]) + "\n";
    out.data["witness"] = name;
  }
  return out;
}

Output require_homological(const VectorField& q) {
  const HomologicalCheck h = is_homological(q);
  Output out;
  out.ok = false;
  const std::string& name = (*q.context())[*h.witness].name;
  out.text = "Q2 FAIL " + name + ": " + to_string(h.square[*h.witness]) + "\n";
  out.data["homological"] = false;
  out.data["witness"] = name;
  return out;
}

json tables_json(const TwoLayerStructure& t) {
  const NegativeBasis& basis = t.basis;
  auto coeffs = [&](const Coefficients& c) {
    json o = json::object();
    for (std::size_t k = 0; k < c.size(); ++k)
      if (!c[k].is_zero()) o[basis[k].label] = to_string(c[k]);
    return o;
  };
  json out;
  json labels = json::array();
  for (const auto& b : basis.elements()) labels.push_back(b.label);
  out["basis"] = labels;
  json bracket = json::object(), derived = json::object(), d = json::object(),
       anchor = json::object();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      bracket[basis[i].label][basis[j].label] = coeffs(t.bracket[i][j]);
      derived[basis[i].label][basis[j].label] = coeffs(t.derived[i][j]);
    }
    d[basis[i].label] = coeffs(t.differential[i]);
    anchor[basis[i].label] = field_json(t.anchor[i]);
  }
  out["bracket"] = bracket;
  out["d"] = d;
  out["newbracket"] = derived;
  out["anchor"] = anchor;
  return out;
}

Output two_layer_tables(const ChartDocument& doc, const std::vector<std::string>& args) {
  expect_args(args, 1);
  const std::string& name = arg(args, 0, "field");
  const VectorField& q = doc.field(name);
  const HigherAlgebroid a(q, Validation::shape_only);
  if (!is_homological(q).homological) return require_homological(q);
  TablesDocument t{name, two_layer(a)};
  Output out;
  out.text = print_tables(t);
  out.data = tables_json(t.tables);
  return out;
}

Output verify_identities(const ChartDocument& doc, const std::vector<std::string>& args,
                         const CommandOptions& options) {
  expect_args(args, 1);
  const HigherAlgebroid a(doc.field(arg(args, 0, "field")), Validation::shape_only);
  SampleSet samples = basis_samples(a);
  samples.tuples = random_samples(a, options.random_samples, options.seed);
  const IdentityReport report = verify_two_layer(a, samples);
  Output out;
  out.ok = report.ok();
  out.text = format_report(report);
  json results = json::array();
  for (const auto& r : report.results) {
    json e;
    e["identity"] = std::string(identity_name(r.identity));
    e["ok"] = r.ok;
    e["instances"] = r.instances;
    if (!r.ok) e["residual"] = field_json(r.residual);
    results.push_back(e);
  }
  out.data["seed"] = options.seed;
  out.data["identities"] = results;
  return out;
}

Output axioms(const ChartDocument& doc, const std::vector<std::string>& args) {
  expect_args(args, 1);
  const VectorField& q = doc.field(arg(args, 0, "field"));
  const auto degree = doc.context->degree();
  if (!degree || *degree > 1)
    throw UsageError("axioms needs an N=1 chart (coordinate weights 0 and 1 only)");
  const AlgebroidChart chart(q);
  const AxiomReport report = verify_algebroid_axioms(chart);
  Output out;
  out.ok = report.ok();
  out.text = format_report(report);
  json list = json::array();
  for (const auto& a : report.axioms) {
    json e;
    e["axiom"] = a.name;
    e["ok"] = a.ok;
    e["instances"] = a.instances;
    if (!a.ok) {
      e["witness"] = a.witness;
      e["residual"] = a.residual;
    }
    list.push_back(e);
  }
  out.data["axioms"] = list;
  out.data["homological"] = report.homological;
  return out;
}

Output morphism(const ChartDocument& doc, const std::vector<std::string>& args) {
  expect_args(args, 3);
  const Substitution& sigma = doc.map(arg(args, 0, "map"));
  const VectorField& q1 = doc.field(arg(args, 1, "source field"));
  const VectorField& q2 = doc.field(arg(args, 2, "target field"));
  if (!sigma.preserves_weight()) throw UsageError("map does not preserve weight");
  const RelatednessCheck r = check_f_related(sigma, q1, q2);
  Output out;
  out.ok = r.related;
  out.text = r.related ? "MORPHISM OK\n" : "MORPHISM FAIL\n";
  json residuals = json::object();
  for (std::size_t i = 0; i < r.residuals.size(); ++i) {
    if (r.residuals[i].is_zero()) continue;
    const std::string& name = (*doc.context)[i].name;
    out.text += "  " + name + ": " + to_string(r.residuals[i]) + "\n";
    residuals[name] = to_string(r.residuals[i]);
  }
  out.data["related"] = r.related;
  out.data["residuals"] = residuals;
  return out;
}

Output linfty(const ChartDocument& doc, const std::vector<std::string>& args) {
  expect_args(args, 1);
  const VectorField& q = doc.field(arg(args, 0, "field"));
  const HigherAlgebroid a(q, Validation::shape_only);
  const LInftyStructure l = linfty_brackets(a);
  Output out;
  json brackets = json::array();
  for (const auto& [key, cls] : l.brackets) {
    std::string k;
    json names = json::array();
    for (std::size_t c : key) {
      if (!k.empty()) k += ",";
      k += (*l.context)[c].name;
      names.push_back((*l.context)[c].name);
    }
    out.text += "l(" + k + ") = " + to_string(cls) + "\n";
    json e;
    e["arguments"] = names;
    e["value"] = field_json(cls);
    brackets.push_back(e);
  }
  out.data["max_arity"] = l.max_arity;
  out.data["brackets"] = brackets;
  return out;
}

Output recover(std::string_view input, const std::vector<std::string>& args) {
  expect_args(args, 0);
  const TablesDocument t = parse_tables(input);
  const VectorField q = recover_Q(t.tables);
  Output out;
  out.text = print_coordinates(*q.context()) + print_field(t.source, q);
  out.data["field"] = t.source;
  out.data["components"] = field_json(q);
  return out;
}

}  // namespace

CommandResult run_command(std::string_view command, const std::vector<std::string>& args,
                          std::string_view input, const CommandOptions& options) {
  CommandResult result;
  Output out;
  try {
    if (command == "recover") {
      out = recover(input, args);
    } else {
      const ChartDocument doc = parse_document(input);
      if (command == "check-q2") out = check_q2(doc, args);
      else if (command == "two-layer") out = two_layer_tables(doc, args);
      else if (command == "verify-identities") out = verify_identities(doc, args, options);
      else if (command == "axioms") out = axioms(doc, args);
      else if (command == "morphism") out = morphism(doc, args);
      else if (command == "linfty") out = linfty(doc, args);
      else throw UsageError("unknown command '" + std::string(command) + "'");
    }
  } catch (const InconsistentTables& e) {
    result.status = 1;
    result.output = std::string("error: ") + e.what() + "\n";
    return result;
  } catch (const Error& e) {
    result.status = 2;
    result.output = std::string("error: ") + e.what() + "\n";
    return result;
  }
  result.status = out.ok ? 0 : 1;
  if (options.format == OutputFormat::text) {
    result.output = out.text;
  } else {
    json j;
    j["command"] = std::string(command);
    j["ok"] = out.ok;
    for (auto& [k, v] : out.data.items()) j[k] = v;
    result.output = j.dump(2) + "\n";
  }
  return result;
}

}  // namespace qmk
