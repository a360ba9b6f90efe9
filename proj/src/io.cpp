#include "mlv/io.hpp"

#include <fstream>
#include <sstream>

#include "mlv/errors.hpp"

namespace mlv {

namespace {

template <class F>
auto guarded(const char* what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const BudgetExceeded&) {
    throw;
  } catch (const PreconditionError& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

const json& field(const json& j, const char* name) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

std::vector<Residue> residues(const json& j, PrimeModulus p) {
  if (!j.is_array()) throw ParseError("coefficients must be an array");
  std::vector<Residue> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    const auto x = v.get<std::int64_t>();
    if (x < 0 || x >= p.value()) throw ParseError("coefficient " + std::to_string(x) + " is not reduced mod p");
    out.push_back(static_cast<Residue>(x));
  }
  return out;
}

json residue_array(const std::vector<Residue>& coeffs) {
  json a = json::array();
  for (auto c : coeffs) a.push_back(static_cast<int>(c));
  return a;
}

std::vector<std::size_t> support_from(const json& j, std::size_t k) {
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    const auto s = v.get<std::int64_t>();
    if (s < 1 || static_cast<std::size_t>(s) > k) throw ParseError("support index " + std::to_string(s) + " out of range");
    out.push_back(static_cast<std::size_t>(s - 1));
  }
  return out;
}

json support_to(const std::vector<std::size_t>& support) {
  json a = json::array();
  for (auto s : support) a.push_back(s + 1);
  return a;
}

// Shape from inline p/k/dims fields.
Shape inline_shape(const json& j) {
  const PrimeModulus p(field(j, "p").get<int>());
  const auto dims = field(j, "dims").get<std::vector<std::size_t>>();
  if (j.contains("k") && j.at("k").get<std::size_t>() != dims.size())
    throw ParseError("k disagrees with the length of dims");
  return {p, dims};
}

json optional_monomial(const std::optional<PowerMonomial>& m, const ExactDensity& c) {
  return m ? monomial_to_json(*m, c) : json(nullptr);
}

}  // namespace

json shape_to_json(const Shape& s) {
  return json{{"p", s.modulus().value()}, {"k", s.arity()}, {"dims", s.dims()}};
}

Shape shape_from_json(const json& j) {
  return guarded("shape", [&] { return inline_shape(j); });
}

json form_to_json(const MultilinearForm& f) {
  auto j = shape_to_json(f.shape());
  j["support"] = support_to(f.support());
  j["coeffs"] = residue_array(f.coeffs());
  return j;
}

MultilinearForm form_from_json(const json& j, const Shape* context) {
  return guarded("form", [&] {
    std::optional<Shape> shape;
    if (j.contains("p") || j.contains("dims") || !context) shape = inline_shape(j);
    if (context) {
      if (shape && !(*shape == *context)) throw ParseError("form shape disagrees with the variety shape");
      shape = *context;
    }
    auto support = support_from(field(j, "support"), shape->arity());
    auto coeffs = residues(field(j, "coeffs"), shape->modulus());
    return MultilinearForm(*shape, std::move(support), std::move(coeffs));
  });
}

json map_to_json(const MultilinearMap& m) {
  auto j = shape_to_json(m.shape());
  j["support"] = support_to(m.support());
  json comps = json::array();
  for (const auto& f : m.components()) comps.push_back(residue_array(f.coeffs()));
  j["components"] = std::move(comps);
  return j;
}

MultilinearMap map_from_json(const json& j) {
  return guarded("map", [&] {
    const auto shape = inline_shape(j);
    const auto support = support_from(field(j, "support"), shape.arity());
    std::vector<MultilinearForm> comps;
    for (const auto& c : field(j, "components")) comps.emplace_back(shape, support, residues(c, shape.modulus()));
    return MultilinearMap(shape, support, std::move(comps));
  });
}

json variety_to_json(const Variety& v) {
  json forms = json::array();
  for (const auto& f : v.forms()) forms.push_back(form_to_json(f));
  return json{{"shape", shape_to_json(v.shape())}, {"forms", std::move(forms)}, {"empty", v.is_empty_marker()}};
}

Variety variety_from_json(const json& j) {
  return guarded("variety", [&] {
    const auto shape = inline_shape(field(j, "shape"));
    if (j.contains("empty") && j.at("empty").get<bool>()) return Variety::empty(shape);
    std::vector<MultilinearForm> forms;
    if (j.contains("forms"))
      for (const auto& f : j.at("forms")) forms.push_back(form_from_json(f, &shape));
    return Variety(shape, std::move(forms));
  });
}

json point_set_to_json(const PointSet& s) {
  return json{{"shape", shape_to_json(s.shape())}, {"points", s.indices()}};
}

PointSet point_set_from_json(const json& j) {
  return guarded("point set", [&] {
    PointSet s(inline_shape(field(j, "shape")));
    for (const auto& v : field(j, "points")) {
      const auto x = v.get<std::uint64_t>();
      if (x >= s.universe()) throw ParseError("point index " + std::to_string(x) + " outside the group");
      s.insert(x);
    }
    return s;
  });
}

json density_to_json(const ExactDensity& d) { return d.to_string(); }

ExactDensity density_from_json(PrimeModulus p, const json& j) {
  return guarded("density", [&] { return ExactDensity::parse(p, j.get<std::string>()); });
}

json monomial_to_json(const PowerMonomial& m, const ExactDensity& c) {
  return json{{"two_exp", m.two_exp}, {"p_exp", m.p_exp}, {"c_exp", m.c_exp},
              {"log_p", static_cast<double>(log_p(m, c))}};
}

PowerMonomial monomial_from_json(const json& j) {
  return guarded("monomial", [&] {
    return PowerMonomial{field(j, "two_exp").get<std::int64_t>(), field(j, "p_exp").get<std::int64_t>(),
                         field(j, "c_exp").get<std::int64_t>()};
  });
}

json ledger_record_to_json(const LedgerRecord& r) {
  json j;
  j["depth"] = r.depth;
  j["arity"] = r.arity;
  j["direction"] = r.direction ? json(*r.direction + 1) : json(nullptr);
  j["c"] = density_to_json(r.c);
  j["r"] = r.r;
  j["r_bound"] = r.r_bound;
  j["c_prime"] = optional_monomial(r.c_prime, r.c);
  j["c_double_prime"] = optional_monomial(r.c_double_prime, r.c);
  j["epsilon"] = optional_monomial(r.epsilon, r.c);
  j["measured_fiber_density"] =
      r.measured_fiber_density ? density_to_json(*r.measured_fiber_density) : json(nullptr);
  j["approx_steps_formula"] = r.approx_steps_formula;
  j["approx_steps_used"] = r.approx_steps_used;
  j["fiber_threshold_clamped"] = r.fiber_threshold_clamped;
  j["epsilon_clamped"] = r.epsilon_clamped;
  j["codim_from_approx"] = r.codim_from_approx;
  j["codim_from_columns"] = r.codim_from_columns;
  j["codim_contribution"] = r.codim_contribution;
  j["budget"] = r.budget;
  return j;
}

LedgerRecord ledger_record_from_json(PrimeModulus p, const json& j) {
  return guarded("ledger record", [&] {
    auto opt_mono = [&](const char* name) -> std::optional<PowerMonomial> {
      const auto& v = field(j, name);
      if (v.is_null()) return std::nullopt;
      return monomial_from_json(v);
    };
    LedgerRecord r{.c = density_from_json(p, field(j, "c"))};
    r.depth = field(j, "depth").get<std::size_t>();
    r.arity = field(j, "arity").get<std::size_t>();
    const auto& dir = field(j, "direction");
    if (!dir.is_null()) {
      const auto d = dir.get<std::size_t>();
      if (d < 1) throw ParseError("direction is 1-based");
      r.direction = d - 1;
    }
    r.r = field(j, "r").get<std::int64_t>();
    r.r_bound = field(j, "r_bound").get<std::int64_t>();
    r.c_prime = opt_mono("c_prime");
    r.c_double_prime = opt_mono("c_double_prime");
    r.epsilon = opt_mono("epsilon");
    const auto& m = field(j, "measured_fiber_density");
    if (!m.is_null()) r.measured_fiber_density = density_from_json(p, m);
    r.approx_steps_formula = field(j, "approx_steps_formula").get<std::int64_t>();
    r.approx_steps_used = field(j, "approx_steps_used").get<std::int64_t>();
    r.fiber_threshold_clamped = field(j, "fiber_threshold_clamped").get<bool>();
    r.epsilon_clamped = field(j, "epsilon_clamped").get<bool>();
    r.codim_from_approx = field(j, "codim_from_approx").get<std::int64_t>();
    r.codim_from_columns = field(j, "codim_from_columns").get<std::int64_t>();
    r.codim_contribution = field(j, "codim_contribution").get<std::int64_t>();
    r.budget = field(j, "budget").get<std::int64_t>();
    return r;
  });
}

json run_config_to_json(const RunConfig& c) {
  return json{{"command", c.command},
              {"seed", c.seed},
              {"p", c.p},
              {"k", c.dims.size()},
              {"dims", c.dims},
              {"generator", c.generator},
              {"generator_params", c.generator_params},
              {"budget", c.budget},
              {"input", c.input},
              {"output", c.output},
              {"rng", c.rng}};
}

RunConfig run_config_from_json(const json& j) {
  return guarded("run config", [&] {
    RunConfig c;
    c.command = field(j, "command").get<std::string>();
    c.seed = field(j, "seed").get<std::uint64_t>();
    c.p = field(j, "p").get<int>();
    c.dims = field(j, "dims").get<std::vector<std::size_t>>();
    c.generator = field(j, "generator").get<std::string>();
    c.generator_params = field(j, "generator_params");
    c.budget = field(j, "budget").get<std::uint64_t>();
    c.input = field(j, "input").get<std::string>();
    c.output = field(j, "output").get<std::string>();
    c.rng = field(j, "rng").get<std::string>();
    return c;
  });
}

json certificate_to_json(const SubvarietyCertificate& cert, const RunConfig& config) {
  json ledger = json::array();
  for (const auto& r : cert.ledger) ledger.push_back(ledger_record_to_json(r));
  return json{{"format", kCertificateFormat},
              {"config", run_config_to_json(config)},
              {"input", variety_to_json(cert.input)},
              {"input_density", density_to_json(cert.input_density)},
              {"output", variety_to_json(cert.output)},
              {"output_codim", cert.output_codim},
              {"budget", cert.budget},
              {"ledger", std::move(ledger)},
              {"verified",
               {{"containment", cert.verified.containment},
                {"nonempty", cert.verified.nonempty},
                {"budget", cert.verified.budget}}}};
}

SubvarietyCertificate certificate_from_json(const json& j) {
  return guarded("certificate", [&] {
    if (field(j, "format").get<std::string>() != kCertificateFormat)
      throw ParseError("unknown certificate format");
    auto input = variety_from_json(field(j, "input"));
    const auto p = input.shape().modulus();
    SubvarietyCertificate cert{.input = input,
                               .input_density = density_from_json(p, field(j, "input_density")),
                               .output = variety_from_json(field(j, "output"))};
    cert.output_codim = field(j, "output_codim").get<std::int64_t>();
    cert.budget = field(j, "budget").get<std::int64_t>();
    for (const auto& r : field(j, "ledger")) cert.ledger.push_back(ledger_record_from_json(p, r));
    const auto& v = field(j, "verified");
    cert.verified.containment = field(v, "containment").get<bool>();
    cert.verified.nonempty = field(v, "nonempty").get<bool>();
    cert.verified.budget = field(v, "budget").get<bool>();
    return cert;
  });
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace mlv
