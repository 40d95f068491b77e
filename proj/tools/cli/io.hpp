#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gausschan/channel.hpp"
#include "gausschan/dilation.hpp"
#include "gausschan/gaussian_state.hpp"

namespace gausschan::cli {

using json = nlohmann::json;

/// Raised for anything wrong with a file: unreadable, not JSON, wrong schema,
/// non-finite numbers, inconsistent sizes. Maps to exit status 65.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json matrix_to_json(const Matrix& m);
json vector_to_json(const Vector& v);
Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols, const char* what);
Vector vector_from_json(const json& j, Eigen::Index n, const char* what);

json channel_to_json(const ChannelParams& ch);
json state_to_json(const GaussianState& st);
json dilation_to_json(const DilationSpec& dil);

/// Schema-checked decoders. Semantic checks (admissibility of a state's
/// covariance, symmetry of Y) are applied with cfg and reported as InputError.
ChannelParams channel_from_json(const json& j, const ToleranceConfig& cfg = {});
GaussianState state_from_json(const json& j, const ToleranceConfig& cfg = {});
DilationSpec dilation_from_json(const json& j);

/// Reads a whole file; InputError on failure.
std::string read_file(const std::string& path);
json parse_json(const std::string& text, const std::string& origin);
void write_file(const std::string& path, const std::string& text);

/// Doubles are printed as the shortest decimal that round-trips.
std::string dump(const json& j);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) noexcept;
std::string hex64(std::uint64_t v);

}  // namespace gausschan::cli
