#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "mlv/construct.hpp"
#include "mlv/errors.hpp"
#include "mlv/generate.hpp"
#include "mlv/harness.hpp"
#include "mlv/io.hpp"

using namespace mlv;

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kPrecondition = 3,
  kEmpty = 4,
  kBudget = 5,
  kVerification = 6,
};

struct Common {
  std::string input;
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 0;
  int p = 2;
  std::vector<std::size_t> dims;
};

RunConfig file_config(const std::string& command, const Common& o, const Shape& shape) {
  RunConfig c;
  c.command = command;
  c.seed = o.seed;
  c.p = shape.modulus().value();
  c.dims = shape.dims();
  c.budget = enumeration_budget();
  c.input = o.input;
  c.output = o.output;
  c.rng = kRngId;
  return c;
}

void emit(const Common& o, const std::string& text) {
  if (o.output.empty())
    std::cout << text;
  else
    write_text_file(o.output, text);
}

json params_from(const std::string& text) {
  if (text.empty()) return json::object();
  auto j = parse_json(text);
  if (!j.is_object()) throw ParseError("generator parameters must be a JSON object");
  return j;
}

template <class F>
json or_null(F&& f) {
  try {
    return f();
  } catch (const PreconditionError&) {
    return nullptr;
  } catch (const BudgetExceeded&) {
    return nullptr;
  }
}

int cmd_rank(const Common& o) {
  const auto f = form_from_json(read_json_file(o.input));
  const auto b = bias(f);
  json report{{"format", kReportFormat}, {"config", run_config_to_json(file_config("rank", o, f.shape()))}};
  report["bias"] = density_to_json(b);
  report["arank"] = or_null([&] { return json(arank(f).value); });
  report["prank_lower_bound"] = or_null([&] { return json(prank_lower_bound(f)); });
  report["prank_flattening_upper_bound"] = or_null([&] { return json(prank_flattening_upper_bound(f)); });
  report["prank_k2"] =
      f.shape().arity() == 2 ? or_null([&] { return json(prank_exact_k2(f)); }) : json(nullptr);
  report["prank"] = or_null([&] {
    const auto r = prank_exact_small(f);
    return json{{"lower", r.lower}, {"upper", r.upper}, {"exact", r.exact()}};
  });
  report["zero_fiber"] = or_null([&] {
    const auto z = zero_fiber_identity_check(f);
    return json{{"zero_count", z.zero_count}, {"bias_count", z.bias_count.get_str()}, {"holds", z.holds}};
  });
  if (o.format == "json") {
    emit(o, dump(report));
  } else {
    std::string text;
    for (const auto& [key, value] : report.items())
      if (key != "config" && key != "format") text += key + ": " + value.dump() + "\n";
    emit(o, text);
  }
  return kOk;
}

int cmd_density(const Common& o) {
  const auto v = variety_from_json(read_json_file(o.input));
  const auto c = density(v);
  json report{{"format", kReportFormat},
              {"config", run_config_to_json(file_config("density", o, v.shape()))},
              {"density", density_to_json(c)},
              {"points", members(v).count()},
              {"codim", v.codim()},
              {"empty", v.is_empty_marker()}};
  if (o.format == "json")
    emit(o, dump(report));
  else
    emit(o, c.to_string() + "\n");
  return kOk;
}

int cmd_find_sub(const Common& o, std::optional<std::int64_t> forced) {
  const auto v = variety_from_json(read_json_file(o.input));
  FindOptions options;
  options.forced_approx_steps = forced;
  auto config = file_config("find-sub", o, v.shape());
  if (forced) config.generator_params["forced_approx_steps"] = *forced;
  std::optional<SubvarietyCertificate> found;
  try {
    found = find_subvariety(v, options);
  } catch (const ClaimViolation& e) {
    const auto& d = e.diagnostic();
    std::cerr << "claim violated: " << e.what() << "\n"
              << "  first point outside V~: " << d.point << "\n"
              << "  |A~ \\ V~| = " << d.excess << " of " << d.group_size << "\n"
              << "  measured c'' = " << d.measured_fiber_density.to_string() << "\n"
              << "  c''^{k+1} = " << d.claim_bound.to_string() << "\n"
              << "  excess density >= c''^{k+1}: " << (d.bound_observed ? "true" : "false") << "\n";
    return kVerification;
  }
  const auto& cert = *found;
  if (!o.output.empty()) write_text_file(o.output, dump(certificate_to_json(cert, config)));
  std::cout << std::boolalpha << "density=" << cert.input_density.to_string() << " codim=" << cert.output_codim
            << " budget=" << cert.budget << " containment=" << cert.verified.containment
            << " nonempty=" << cert.verified.nonempty << " budget_ok=" << cert.verified.budget << "\n";
  if (o.output.empty()) std::cout << dump(certificate_to_json(cert, config));
  return cert.verified.all() ? kOk : kVerification;
}

int cmd_verify(const Common& o, const std::string& certificate) {
  const auto v = variety_from_json(read_json_file(o.input));
  const auto cert = certificate_from_json(read_json_file(certificate));
  const auto r = verify_certificate(v, cert);
  std::cout << std::boolalpha << "containment=" << r.containment << " nonempty=" << r.nonempty
            << " budget=" << r.budget << "\n";
  return r.all() ? kOk : kVerification;
}

int cmd_conv_check(const Common& o, const std::string& bad_path) {
  const auto w = variety_from_json(read_json_file(o.input));
  const auto bad = bad_path.empty() ? PointSet(w.shape()) : point_set_from_json(read_json_file(bad_path));
  const auto r = conv_fill_check(w, bad);
  json report{{"format", kReportFormat},
              {"config", run_config_to_json(file_config("conv-check", o, w.shape()))},
              {"success", r.success},
              {"points_checked", r.points_checked},
              {"bad_size", r.bad_size},
              {"codim", r.codim},
              {"flat_witnesses", r.flat_witnesses},
              {"first_failure", r.first_failure ? json(*r.first_failure) : json(nullptr)}};
  emit(o, dump(report));
  return r.success ? kOk : kVerification;
}

int cmd_approx(const Common& o, std::size_t steps, bool sampled) {
  const auto phi = map_from_json(read_json_file(o.input));
  const auto r = sampled ? external_approx_sampled(phi, steps, o.seed) : external_approx(phi, steps);
  json functionals = json::array();
  for (const auto& f : r.functionals) {
    json a = json::array();
    for (auto x : f.coords()) a.push_back(static_cast<int>(x));
    functionals.push_back(std::move(a));
  }
  auto config = file_config("approx", o, phi.shape());
  config.generator_params = json{{"steps", steps}, {"sampled", sampled}};
  json report{{"format", kReportFormat},
              {"config", run_config_to_json(config)},
              {"phi", map_to_json(r.phi)},
              {"functionals", std::move(functionals)},
              {"error_count", r.error_count},
              {"survivors", r.survivors},
              {"containment_checked", r.containment_checked}};
  emit(o, dump(report));
  return kOk;
}

RunConfig generator_config(const std::string& command, const Common& o, const std::string& generator,
                           const std::string& params) {
  if (o.dims.empty()) throw PreconditionError("--dims is required");
  RunConfig c;
  c.command = command;
  c.seed = o.seed;
  c.p = o.p;
  c.dims = o.dims;
  c.generator = generator;
  c.generator_params = params_from(params);
  c.budget = enumeration_budget();
  c.output = o.output;
  c.rng = kRngId;
  return c;
}

int cmd_sweep(const Common& o, const std::string& generator, const std::string& params, std::size_t instances,
              bool timing) {
  SweepSpec spec{.config = generator_config("sweep", o, generator, params), .instances = instances, .timing = timing};
  const auto rows = run_sweep(spec);
  if (o.format == "csv") {
    emit(o, sweep_csv(rows));
    if (!o.output.empty()) write_text_file(o.output + ".run.json", dump(sweep_json(spec, {})));
  } else {
    emit(o, dump(sweep_json(spec, rows)));
  }
  return kOk;
}

int cmd_generate(const Common& o, const std::string& generator, const std::string& params) {
  const auto config = generator_config("generate", o, generator, params);
  auto j = variety_to_json(generate_instance(config, config.seed));
  j["config"] = run_config_to_json(config);
  emit(o, dump(j));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mlvar: exact multilinear varieties over small prime fields"};
  app.require_subcommand(1);
  std::uint64_t budget = enumeration_budget();
  app.add_option("--budget", budget, "Enumeration budget in points")->capture_default_str();

  Common o;
  auto add_io = [&](CLI::App* sub, bool input_required) {
    auto* in = sub->add_option("--input", o.input, "Input JSON file");
    if (input_required) in->required()->check(CLI::ExistingFile);
    sub->add_option("--output", o.output, "Output file (stdout when omitted)");
  };
  auto add_format = [&](CLI::App* sub, std::vector<std::string> allowed) {
    o.format = allowed.front();
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember(allowed));
  };
  auto add_gen = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Base seed");
    sub->add_option("--p", o.p, "Prime modulus");
    sub->add_option("--dims", o.dims, "Factor dimensions, comma separated")->delimiter(',')->required();
  };

  auto* rank = app.add_subcommand("rank", "Bias, analytic rank and partition-rank bounds of a form");
  add_io(rank, true);
  add_format(rank, {"json", "text"});

  auto* dens = app.add_subcommand("density", "Exact density of a variety");
  add_io(dens, true);
  add_format(dens, {"json", "text"});

  std::optional<std::int64_t> forced;
  auto* find = app.add_subcommand("find-sub", "Extract a low-codimension subvariety with a certificate");
  add_io(find, true);
  find->add_option("--force-approx-steps", forced, "Negative control: override the approximation steps");

  std::string certificate;
  auto* verify = app.add_subcommand("verify", "Re-check a certificate against a variety");
  add_io(verify, true);
  verify->add_option("--certificate", certificate, "Certificate JSON file")->required()->check(CLI::ExistingFile);

  std::string bad;
  auto* conv = app.add_subcommand("conv-check", "Convolution filling check on W with bad set B");
  add_io(conv, true);
  conv->add_option("--bad", bad, "Point-set JSON file for B (empty when omitted)")->check(CLI::ExistingFile);

  std::size_t steps = 0;
  bool sampled = false;
  auto* approx = app.add_subcommand("approx", "External approximation of a multilinear map");
  add_io(approx, true);
  approx->add_option("--steps,-s", steps, "Number of functionals s")->required();
  approx->add_flag("--sampled", sampled, "Sample functionals from --seed instead of the greedy scan");
  approx->add_option("--seed", o.seed, "Seed for --sampled");

  std::string generator = "planted-product";
  std::string params;
  std::size_t instances = 0;
  bool timing = false;
  auto* sweep = app.add_subcommand("sweep", "Seeded sweep of the subvariety finder, one CSV row per instance");
  add_gen(sweep);
  sweep->add_option("--output", o.output, "Output file (stdout when omitted)");
  add_format(sweep, {"csv", "json"});
  sweep->add_option("--generator", generator, "Instance generator")
      ->check(CLI::IsMember({"planted-product", "random-forms", "low-prank", "mixed"}));
  sweep->add_option("--params", params, "Generator parameters as a JSON object");
  sweep->add_option("--instances,-n", instances, "Number of instances");
  sweep->add_flag("--timing", timing, "Fill the runtime column with wall-clock seconds");

  auto* gen = app.add_subcommand("generate", "Write a seeded random variety");
  add_gen(gen);
  gen->add_option("--output", o.output, "Output file (stdout when omitted)");
  gen->add_option("--generator", generator, "Instance generator")
      ->check(CLI::IsMember({"planted-product", "random-forms", "low-prank", "mixed"}));
  gen->add_option("--params", params, "Generator parameters as a JSON object");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    set_enumeration_budget(budget);
    if (*rank) return cmd_rank(o);
    if (*dens) return cmd_density(o);
    if (*find) return cmd_find_sub(o, forced);
    if (*verify) return cmd_verify(o, certificate);
    if (*conv) return cmd_conv_check(o, bad);
    if (*approx) return cmd_approx(o, steps, sampled);
    if (*sweep) return cmd_sweep(o, generator, params, instances, timing);
    if (*gen) return cmd_generate(o, generator, params);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const EmptyVarietyError& e) {
    std::cerr << "empty variety: " << e.what() << "\n";
    return kEmpty;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kVerification;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  }
  return kUsage;
}
