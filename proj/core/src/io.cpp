#include "spectralset/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace spectralset {

namespace {

[[noreturn]] void bad(const std::string& context, const std::string& what) {
  throw InputError(context + ": " + what);
}

Eigen::MatrixXd parse_real_grid(const nlohmann::json& j, int n,
                                const char* field, const std::string& context) {
  if (!j.contains(field) || !j[field].is_array() ||
      static_cast<int>(j[field].size()) != n) {
    bad(context, std::string("field \"") + field + "\" must be an array of " +
                     std::to_string(n) + " rows");
  }
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = j[field][i];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      bad(context, std::string("row ") + std::to_string(i) + " of \"" + field +
                       "\" must have " + std::to_string(n) + " entries");
    }
    for (int k = 0; k < n; ++k) {
      if (!row[k].is_number()) {
        bad(context, std::string("entry (") + std::to_string(i) + "," +
                         std::to_string(k) + ") of \"" + field +
                         "\" is not a number");
      }
      const double v = row[k].get<double>();
      if (!std::isfinite(v)) {
        bad(context, std::string("entry (") + std::to_string(i) + "," +
                         std::to_string(k) + ") of \"" + field +
                         "\" is not finite");
      }
      out(i, k) = v;
    }
  }
  return out;
}

}  // namespace

Operator parse_matrix_json(const std::string& text, const std::string& context) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    // parse_error for malformed text, out_of_range for literals like 1e999
    bad(context, std::string("invalid JSON (") + e.what() + ")");
  }
  if (!j.is_object()) bad(context, "top level must be an object");
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    bad(context, "field \"n\" must be an integer");
  }
  const int n = j["n"].get<int>();
  if (n < 1 || n > 4096) bad(context, "\"n\" must be between 1 and 4096");
  const Eigen::MatrixXd re = parse_real_grid(j, n, "re", context);
  const Eigen::MatrixXd im = parse_real_grid(j, n, "im", context);
  Matrix m(n, n);
  m.real() = re;
  m.imag() = im;
  return Operator(std::move(m));
}

std::string matrix_to_json(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  nlohmann::ordered_json j;
  j["n"] = n;
  nlohmann::ordered_json re = nlohmann::ordered_json::array();
  nlohmann::ordered_json im = nlohmann::ordered_json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::ordered_json re_row = nlohmann::ordered_json::array();
    nlohmann::ordered_json im_row = nlohmann::ordered_json::array();
    for (int k = 0; k < n; ++k) {
      re_row.push_back(m(i, k).real());
      im_row.push_back(m(i, k).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j.dump(2);
}

Operator read_matrix_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open matrix file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_matrix_json(buf.str(), path);
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  atomic_write_text(path, matrix_to_json(m) + "\n");
}

void atomic_write_text(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw InputError("cannot open for writing: " + tmp);
    os << text;
    if (!os.flush()) throw InputError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw InputError("cannot move " + tmp + " into place: " + ec.message());
  }
}

}  // namespace spectralset
