#include "mlv/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mlv/construct.hpp"
#include "mlv/errors.hpp"
#include "mlv/generate.hpp"

namespace mlv {

namespace {

std::uint64_t param_or(const RunConfig& c, const char* name, std::uint64_t fallback) {
  if (c.generator_params.contains(name)) return c.generator_params.at(name).get<std::uint64_t>();
  return fallback;
}

std::string dims_text(const std::vector<std::size_t>& dims) {
  std::string out;
  for (std::size_t i = 0; i < dims.size(); ++i) out += (i ? "x" : "") + std::to_string(dims[i]);
  return out;
}

Variety planted(const RunConfig& config, const Shape& shape, Rng& rng, std::uint64_t seed) {
  std::vector<std::size_t> schedule;
  if (config.generator_params.contains("codims"))
    schedule = config.generator_params.at("codims").get<std::vector<std::size_t>>();
  else
    for (std::size_t d = 1; d <= shape.total_dim(); ++d) schedule.push_back(d);
  if (schedule.empty()) throw PreconditionError("empty codimension schedule");
  const auto total = schedule[(seed - config.seed) % schedule.size()];
  return planted_product(rng, shape, random_codim_split(rng, shape, total));
}

}  // namespace

Variety generate_instance(const RunConfig& config, std::uint64_t seed) {
  const Shape shape(PrimeModulus(config.p), config.dims);
  Rng rng(seed);
  const auto& g = config.generator;
  if (g == "planted-product") return planted(config, shape, rng, seed);
  if (g == "random-forms") return random_variety(rng, shape, param_or(config, "forms", 2));
  if (g == "low-prank") return Variety(shape, {planted_low_prank(rng, shape, param_or(config, "r", 1))});
  if (g == "mixed") {
    if ((seed - config.seed) % 2 == 0) return planted(config, shape, rng, seed);
    return random_variety(rng, shape, param_or(config, "forms", 2));
  }
  throw PreconditionError("unknown generator '" + g + "'");
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  std::vector<SweepRow> rows;
  const PrimeModulus p(spec.config.p);
  for (std::size_t i = 0; i < spec.instances; ++i) {
    SweepRow row;
    row.seed = spec.config.seed + i;
    row.p = spec.config.p;
    row.k = spec.config.dims.size();
    row.dims = dims_text(spec.config.dims);
    row.density = row.arank = row.budget = row.runtime = "NA";
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto v = generate_instance(spec.config, row.seed);
      const auto c = density(v);
      row.density = c.to_string();
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(-log_p(PowerMonomial{0, 0, 1}, c)));
      row.arank = buf;
      row.budget = std::to_string(codim_budget(v.shape().arity(), c));
      const auto cert = find_subvariety(v);
      row.achieved_codim = cert.verified.all() ? std::to_string(cert.output_codim) : "unverified";
    } catch (const BudgetExceeded&) {
      row.achieved_codim = "budget-exceeded";
    } catch (const VerificationFailure&) {
      row.achieved_codim = "verification-failed";
    } catch (const Error&) {
      row.achieved_codim = "error";
    }
    if (spec.timing) {
      const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", elapsed);
      row.runtime = buf;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kSweepHeader << "\n";
  for (const auto& r : rows)
    out << r.seed << ',' << r.p << ',' << r.k << ',' << r.dims << ',' << r.density << ',' << r.arank << ','
        << r.achieved_codim << ',' << r.budget << ',' << r.runtime << "\n";
  return out.str();
}

json sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  json out_rows = json::array();
  for (const auto& r : rows)
    out_rows.push_back(json{{"seed", r.seed},
                            {"p", r.p},
                            {"k", r.k},
                            {"dims", r.dims},
                            {"density", r.density},
                            {"arank", r.arank},
                            {"achieved_codim", r.achieved_codim},
                            {"budget", r.budget},
                            {"runtime", r.runtime}});
  return json{{"format", kSweepFormat},
              {"config", run_config_to_json(spec.config)},
              {"instances", spec.instances},
              {"timing", spec.timing},
              {"rows", std::move(out_rows)}};
}

}  // namespace mlv
