#include "povm_domain/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "povm_domain/errors.hpp"

namespace povm_domain::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

std::size_t read_dim(const Json& j) {
  const auto& d = field(j, "d");
  if (!d.is_number_integer() || d.get<long long>() < 1) {
    throw ParseError("\"d\" must be a positive integer");
  }
  return d.get<std::size_t>();
}

void dump_into(const Json& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int level) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (j.type()) {
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      break;
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += indent < 0 ? ", " : ",";
        first = false;
        newline(depth + 1);
        dump_into(item, indent, depth + 1, out);
      }
      if (!j.empty()) newline(depth);
      out += ']';
      break;
    }
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += indent < 0 ? ", " : ",";
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += ": ";
        dump_into(it.value(), indent, depth + 1, out);
      }
      if (!j.empty()) newline(depth);
      out += '}';
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "NaN" : (v > 0 ? "Infinity" : "-Infinity");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.order(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.order(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) throw ParseError("matrix must have d rows");
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != dim) throw ParseError("matrix row must have d entries");
    for (std::size_t k = 0; k < dim; ++k) {
      const auto& z = row[k];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw ParseError("matrix entries must be [re, im] pairs");
      }
      m(i, k) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

Json state_to_json(const DensityMatrix& rho) {
  return Json{{"d", rho.dim()}, {"matrix", matrix_to_json(rho.matrix())}};
}

DensityMatrix state_from_json(const Json& j, double tol) {
  const std::size_t d = read_dim(j);
  return DensityMatrix(matrix_from_json(field(j, "matrix"), d), tol);
}

Json povm_to_json(const Povm& povm) {
  Json effects = Json::array();
  for (const auto& e : povm.effects()) effects.push_back(matrix_to_json(e));
  return Json{{"d", povm.dim()}, {"effects", std::move(effects)}};
}

Povm povm_from_json(const Json& j) {
  const std::size_t d = read_dim(j);
  const auto& list = field(j, "effects");
  if (!list.is_array() || list.empty()) throw ParseError("\"effects\" must be a non-empty list");
  std::vector<ComplexMatrix> effects;
  for (const auto& e : list) effects.push_back(matrix_from_json(e, d));
  return Povm(std::move(effects));
}

Json counts_to_json(const CountRecord& rec) {
  return Json{{"n", rec.shots()}, {"counts", rec.counts()}};
}

CountRecord counts_from_json(const Json& j) {
  const auto& n = field(j, "n");
  const auto& list = field(j, "counts");
  if (!n.is_number_unsigned() && !(n.is_number_integer() && n.get<long long>() >= 0)) {
    throw ParseError("\"n\" must be a non-negative integer");
  }
  if (!list.is_array()) throw ParseError("\"counts\" must be a list");
  std::vector<std::uint64_t> counts;
  for (const auto& c : list) {
    if (!c.is_number_integer() || c.get<long long>() < 0) {
      throw ParseError("counts must be non-negative integers");
    }
    counts.push_back(c.get<std::uint64_t>());
  }
  return CountRecord(n.get<std::uint64_t>(), std::move(counts));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string dump(const Json& j, int indent) {
  std::string out;
  dump_into(j, indent, 0, out);
  return out;
}

}  // namespace povm_domain::io
