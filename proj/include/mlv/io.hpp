#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlv/construct.hpp"
#include "mlv/forms.hpp"
#include "mlv/variety.hpp"

namespace mlv {

using json = nlohmann::ordered_json;

inline constexpr const char* kCertificateFormat = "mlv-certificate/1";
inline constexpr const char* kReportFormat = "mlv-report/1";
inline constexpr const char* kSweepFormat = "mlv-sweep/1";

/// Everything that determines a run. Serialized into every artifact.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  int p = 2;
  std::vector<std::size_t> dims;
  std::string generator;  // empty when the input came from a file
  json generator_params = json::object();
  std::uint64_t budget = 0;
  std::string input;
  std::string output;
  std::string rng;
};

json shape_to_json(const Shape& s);
Shape shape_from_json(const json& j);

// {p, k, dims, support (1-based), coeffs}
json form_to_json(const MultilinearForm& f);
// Shape fields may be omitted when `context` supplies them.
MultilinearForm form_from_json(const json& j, const Shape* context = nullptr);

// {p, k, dims, support, components: [coeffs...]}
json map_to_json(const MultilinearMap& m);
MultilinearMap map_from_json(const json& j);

// {shape, forms, empty}
json variety_to_json(const Variety& v);
Variety variety_from_json(const json& j);

// {shape, points: [index...]} with indices in lexicographic point order.
json point_set_to_json(const PointSet& s);
PointSet point_set_from_json(const json& j);

json density_to_json(const ExactDensity& d);
ExactDensity density_from_json(PrimeModulus p, const json& j);

json monomial_to_json(const PowerMonomial& m, const ExactDensity& c);
PowerMonomial monomial_from_json(const json& j);

json ledger_record_to_json(const LedgerRecord& r);
LedgerRecord ledger_record_from_json(PrimeModulus p, const json& j);

json run_config_to_json(const RunConfig& c);
RunConfig run_config_from_json(const json& j);

json certificate_to_json(const SubvarietyCertificate& cert, const RunConfig& config);
SubvarietyCertificate certificate_from_json(const json& j);

json read_json_file(const std::string& path);
json parse_json(const std::string& text);
void write_text_file(const std::string& path, const std::string& text);
// Two-space indented with a trailing newline.
std::string dump(const json& j);

}  // namespace mlv
