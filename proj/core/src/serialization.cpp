#include "symloop/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace symloop::io {

namespace {

using nlohmann::json;

json matrix_part(const Matrix& m, bool imag) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_json(const Matrix& m) { return {{"re", matrix_part(m, false)}, {"im", matrix_part(m, true)}}; }

Matrix matrix_from(const json& re, const json& im, Eigen::Index n) {
  if (!re.is_array() || !im.is_array() || static_cast<Eigen::Index>(re.size()) != n ||
      static_cast<Eigen::Index>(im.size()) != n)
    throw Error(ErrorCode::ConfigError, "matrix must have " + std::to_string(n) + " rows in re and im");
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = re[static_cast<std::size_t>(i)];
    const auto& c = im[static_cast<std::size_t>(i)];
    if (!r.is_array() || !c.is_array() || static_cast<Eigen::Index>(r.size()) != n ||
        static_cast<Eigen::Index>(c.size()) != n)
      throw Error(ErrorCode::ConfigError, "matrix rows must have " + std::to_string(n) + " entries");
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = cplx(r[static_cast<std::size_t>(j)].get<double>(), c[static_cast<std::size_t>(j)].get<double>());
  }
  return m;
}

json loop_json(const MatrixLoop& loop) {
  json coeffs = json::array();
  for (int m = loop.min_degree(); m <= loop.max_degree(); ++m) {
    json c = matrix_json(loop.coeff(m));
    c["degree"] = m;
    coeffs.push_back(std::move(c));
  }
  return {{"n", loop.rows()}, {"sample_count", loop.sample_count()}, {"coeffs", std::move(coeffs)}};
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("invalid JSON: ") + e.what());
  }
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed document: ") + e.what());
  }
}

void append_entries(std::string& row, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row += ',' + format_number(m(i, j).real());
      row += ',' + format_number(m(i, j).imag());
    }
}

std::string entry_header(Eigen::Index n) {
  std::string h;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::string ij = std::to_string(i) + std::to_string(j);
      h += ",re_" + ij + ",im_" + ij;
    }
  return h;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string loop_to_json(const MatrixLoop& loop) { return loop_json(loop).dump(2); }

MatrixLoop loop_from_json(const std::string& text) {
  const json doc = parse(text);
  return guarded([&] {
    const auto n = doc.at("n").get<Eigen::Index>();
    if (n <= 0) throw Error(ErrorCode::ConfigError, "n must be positive");
    const int k = doc.value("sample_count", kDefaultSampleCount);
    const auto& coeffs = doc.at("coeffs");
    if (!coeffs.is_array() || coeffs.empty()) throw Error(ErrorCode::ConfigError, "coeffs must be a nonempty array");
    int lo = coeffs.front().at("degree").get<int>(), hi = lo;
    for (const auto& c : coeffs) {
      lo = std::min(lo, c.at("degree").get<int>());
      hi = std::max(hi, c.at("degree").get<int>());
    }
    std::vector<Matrix> cs(static_cast<std::size_t>(hi - lo + 1), Matrix::Zero(n, n));
    for (const auto& c : coeffs)
      cs[static_cast<std::size_t>(c.at("degree").get<int>() - lo)] += matrix_from(c.at("re"), c.at("im"), n);
    return MatrixLoop(lo, std::move(cs), k);
  });
}

std::string potential_to_json(const Potential& mu) {
  json terms = json::array();
  for (const auto& t : mu.terms()) {
    json j = matrix_json(t.coeff);
    j["power"] = t.power;
    j["zdegree"] = t.zdegree;
    terms.push_back(std::move(j));
  }
  return json{{"n", mu.n()}, {"terms", std::move(terms)}}.dump(2);
}

Potential potential_from_json(const std::string& text) {
  const json doc = parse(text);
  return guarded([&] {
    const auto n = doc.at("n").get<Eigen::Index>();
    if (n <= 0) throw Error(ErrorCode::ConfigError, "n must be positive");
    std::vector<PotentialTerm> terms;
    for (const auto& t : doc.at("terms"))
      terms.push_back({t.at("power").get<int>(), t.value("zdegree", 0), matrix_from(t.at("re"), t.at("im"), n)});
    return Potential(n, std::move(terms));
  });
}

std::string factorization_to_json(const FactorizationResult& f) {
  return json{{"depth", f.depth},
              {"residual", f.residual},
              {"negative_mass", f.negative_mass},
              {"unitarity", f.unitarity},
              {"phi", loop_json(f.phi)},
              {"b", loop_json(f.b)}}
      .dump(2);
}

std::string flag_to_json(const FlagPoint& flag) {
  json p = json::array();
  for (const auto& m : flag.projectors()) p.push_back(matrix_json(m));
  return json{{"n", flag.n()}, {"ranks", flag.type().ranks}, {"projectors", std::move(p)}}.dump(2);
}

std::string decomposition_to_json(const KSymmetricDecomposition& d) {
  json pi = json::array();
  for (const auto& m : d.pi) pi.push_back(matrix_json(m));
  std::vector<Eigen::Index> alpha_dims;
  for (const auto& a : d.alpha) alpha_dims.push_back(a.cols());
  return json{{"k", d.k},
              {"ranks", d.ranks},
              {"phi_k", matrix_json(d.phi_k)},
              {"pi", std::move(pi)},
              {"alpha_dims", alpha_dims},
              {"psi", loop_json(d.psi)}}
      .dump(2);
}

std::string diagram_to_json(const Diagram& d, const DiagramCheck& check) {
  json labels = json::array();
  for (const auto& p : d.psi) labels.push_back(p.label());
  json norms = json::array();
  for (Eigen::Index i = 0; i < check.arrow_norms.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < check.arrow_norms.cols(); ++j) row.push_back(check.arrow_norms(i, j));
    norms.push_back(std::move(row));
  }
  return json{{"vertices", std::move(labels)},
              {"arrows", d.arrows},
              {"closing", d.closing},
              {"orthogonality", check.orthogonality},
              {"completeness", check.completeness},
              {"absent_arrows", check.absent_arrows},
              {"arrow_norms", std::move(norms)}}
      .dump(2);
}

std::string loop_field_to_csv(const LoopField& field) {
  if (field.values.empty()) return "degree,ix,iy,x,y\n";
  int lo = field.values.front().min_degree(), hi = field.values.front().max_degree();
  for (const auto& v : field.values) {
    lo = std::min(lo, v.min_degree());
    hi = std::max(hi, v.max_degree());
  }
  std::string out = "degree,ix,iy,x,y" + entry_header(field.values.front().rows()) + "\n";
  for (int m = lo; m <= hi; ++m)
    for (int iy = 0; iy < field.grid.ny; ++iy)
      for (int ix = 0; ix < field.grid.nx; ++ix) {
        const cplx z = field.grid.point(ix, iy);
        std::string row = std::to_string(m) + ',' + std::to_string(ix) + ',' + std::to_string(iy) + ',' +
                          format_number(z.real()) + ',' + format_number(z.imag());
        append_entries(row, field.at(ix, iy).coeff(m));
        out += row + '\n';
      }
  return out;
}

std::string projector_field_to_csv(const ProjectorField& field) {
  const Eigen::Index n = field.values.empty() ? 0 : field.values.front().rows();
  std::string out = "ix,iy,x,y,rank" + entry_header(n) + "\n";
  for (int iy = 0; iy < field.grid.ny; ++iy)
    for (int ix = 0; ix < field.grid.nx; ++ix) {
      const cplx z = field.grid.point(ix, iy);
      const auto idx = static_cast<std::size_t>(iy * field.grid.nx + ix);
      std::string row = std::to_string(ix) + ',' + std::to_string(iy) + ',' + format_number(z.real()) + ',' +
                        format_number(z.imag()) + ',' + std::to_string(field.ranks[idx]);
      append_entries(row, field.values[idx]);
      out += row + '\n';
    }
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

MatrixLoop read_loop(const std::string& path) { return loop_from_json(read_text(path)); }
Potential read_potential(const std::string& path) { return potential_from_json(read_text(path)); }

}  // namespace symloop::io
