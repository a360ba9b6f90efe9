#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlv/io.hpp"
#include "mlv/variety.hpp"

namespace mlv {

// Generator names: "planted-product", "random-forms", "low-prank", "mixed".
// Parameters (all optional):
//   planted-product  codims: list of total codimensions, cycled per instance
//   random-forms     forms: number of forms (default 2)
//   low-prank        r: planted partition rank (default 1)
Variety generate_instance(const RunConfig& config, std::uint64_t seed);

struct SweepSpec {
  RunConfig config;
  std::size_t instances = 0;
  bool timing = false;
};

struct SweepRow {
  std::uint64_t seed = 0;
  int p = 2;
  std::size_t k = 0;
  std::string dims;
  std::string density;
  std::string arank;
  std::string achieved_codim;  // or a failure marker
  std::string budget;
  std::string runtime;  // "NA" unless timing was requested
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr const char* kSweepHeader = "seed,p,k,dims,density,arank,achieved_codim,budget,runtime";
std::string sweep_csv(const std::vector<SweepRow>& rows);
json sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace mlv
