#include "cli/io.hpp"

#include "gausschan/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gausschan::cli {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw InputError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing field \"") + key + "\"");
  return *it;
}

int positive_int(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw InputError(std::string("\"") + key + "\" must be an integer");
  const auto n = v.get<long long>();
  if (n < 1 || n > 100000) throw InputError(std::string("\"") + key + "\" out of range");
  return static_cast<int>(n);
}

double finite_number(const json& v, const char* what) {
  if (!v.is_number()) throw InputError(std::string(what) + ": entries must be numbers");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError(std::string(what) + ": non-finite entry");
  return x;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw InputError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InputError(std::string(what) + ": row " + std::to_string(r) + " must have " + std::to_string(cols) +
                       " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = finite_number(row[static_cast<std::size_t>(c)], what);
  }
  return m;
}

Vector vector_from_json(const json& j, Eigen::Index n, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
    throw InputError(std::string(what) + ": expected " + std::to_string(n) + " entries");
  }
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = finite_number(j[static_cast<std::size_t>(i)], what);
  return v;
}

json channel_to_json(const ChannelParams& ch) {
  return json{{"d", ch.modes()},
              {"X", matrix_to_json(ch.x)},
              {"Y", matrix_to_json(ch.y)},
              {"w", vector_to_json(ch.w)},
              {"convention", "blocked"}};
}

json state_to_json(const GaussianState& st) {
  return json{{"d", st.form().modes()}, {"mean", vector_to_json(st.mean())}, {"cov", matrix_to_json(st.cov())}};
}

json dilation_to_json(const DilationSpec& dil) {
  return json{{"d_in", dil.d_in}, {"d_env", dil.d_env}, {"G", matrix_to_json(dil.g)}, {"u", vector_to_json(dil.u)}};
}

ChannelParams channel_from_json(const json& j, const ToleranceConfig& cfg) {
  const int d = positive_int(j, "d");
  const json& conv = field(j, "convention");
  if (!conv.is_string() || conv.get<std::string>() != "blocked") {
    throw InputError("only the \"blocked\" convention is accepted");
  }
  const Eigen::Index n = 2 * d;
  Matrix x = matrix_from_json(field(j, "X"), n, n, "X");
  Matrix y = matrix_from_json(field(j, "Y"), n, n, "Y");
  Vector w = vector_from_json(field(j, "w"), n, "w");
  // Stored values are kept bitwise; symmetry is only checked, not enforced.
  if ((y - y.transpose()).norm() > cfg.residual_tol * std::max(1.0, y.norm())) {
    throw InputError("Y: not symmetric");
  }
  return ChannelParams{std::move(x), std::move(y), std::move(w), SymplecticForm::single(d)};
}

GaussianState state_from_json(const json& j, const ToleranceConfig& cfg) {
  const int d = positive_int(j, "d");
  const Eigen::Index n = 2 * d;
  Vector mean = vector_from_json(field(j, "mean"), n, "mean");
  Matrix cov = matrix_from_json(field(j, "cov"), n, n, "cov");
  try {
    return GaussianState::make(std::move(mean), std::move(cov), SymplecticForm::single(d), cfg);
  } catch (const Error& e) {
    throw InputError(std::string("state: ") + e.what());
  }
}

DilationSpec dilation_from_json(const json& j) {
  const int d_in = positive_int(j, "d_in");
  const int d_env = positive_int(j, "d_env");
  const Eigen::Index n = 2 * static_cast<Eigen::Index>(d_in + d_env);
  Matrix g = matrix_from_json(field(j, "G"), n, n, "G");
  Vector u = vector_from_json(field(j, "u"), n, "u");
  return DilationSpec{std::move(g), std::move(u), d_in, d_env};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(origin + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace gausschan::cli
