#pragma once

#include "nlh/exponents.hpp"
#include "nlh/farfield.hpp"
#include "nlh/solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlh::io {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Schema violation; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Field dumps: <base>.bin holds little-endian f64 values (re/im interleaved for
// complex data, components one after the other), <base>.json the sidecar.
void write_field(const fs::path& base, const ScalarField& f);
void write_field(const fs::path& base, const VectorField3& E);

struct FieldDump {
  Grid grid{3, 1.0, 8};
  std::optional<ScalarField> scalar;
  std::optional<VectorField3> vector;
};
FieldDump read_field(const fs::path& base);

void write_profile_csv(const fs::path& file, const std::vector<RadialBin>& bins);

// inf and nan have no JSON literal; they travel as the strings "inf" and "-inf"
json number(double v);
double to_number(const json& j, const std::string& path);

json to_json(const SphereDensity& h);
SphereDensity density_from_json(const json& j, const std::string& path = "density");

// Field-valued weights name a dump relative to base_dir.
json to_json(const Weight& w);
Weight weight_from_json(const json& j, const std::string& path, const fs::path& base_dir = {});
json to_json(const NonlinearitySpec& f);
NonlinearitySpec nonlinearity_from_json(const json& j, const std::string& path = "nonlinearity",
                                        const fs::path& base_dir = {});

json to_json(const ResolventConfig& c);
ResolventConfig resolvent_from_json(const json& j, const std::string& path = "resolvent");

json to_json(const Interval& iv);
json to_json(const ExponentReport& r);
json to_json(const SolveResult& r);
json to_json(const FarFieldPattern& p);

// Stable text form: two-space indent, trailing newline.
std::string dump(const json& j);
json read_json(const fs::path& file);
void write_json(const fs::path& file, const json& j);
void write_text(const fs::path& file, const std::string& text);

}  // namespace nlh::io
