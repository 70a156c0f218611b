#include "hdgpod/snapshot_io.hpp"

#include "hdgpod/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>

namespace hdgpod {

namespace {

std::string hdr_path(const std::string& stem) { return stem + ".hdr"; }
std::string bin_path(const std::string& stem) { return stem + ".bin"; }

void write_header(const std::string& stem, const MatrixHeader& h) {
  std::ofstream os(hdr_path(stem), std::ios::binary);
  if (!os) throw IoError("cannot write " + hdr_path(stem));
  os.imbue(std::locale::classic());
  for (const auto& [k, v] : h.manifest) os << "# " << k << '=' << v << '\n';
  os << "rows " << h.rows << '\n' << "cols " << h.cols << '\n';
  os << "mesh_hash " << h.mesh_hash << '\n';
  os << std::setprecision(17);
  os << "times";
  for (double t : h.times) os << ' ' << t;
  os << '\n';
  if (!h.values.empty()) {
    os << "values";
    for (double v : h.values) os << ' ' << v;
    os << '\n';
  }
  if (!os) throw IoError("failed writing " + hdr_path(stem));
}

}  // namespace

MatrixWriter::MatrixWriter(const std::string& stem, long rows)
    : stem_(stem), rows_(rows), bin_(bin_path(stem), std::ios::binary | std::ios::trunc) {
  if (!bin_) throw IoError("cannot write " + bin_path(stem));
}

MatrixWriter::~MatrixWriter() = default;

void MatrixWriter::append(const Eigen::Ref<const Eigen::VectorXd>& column) {
  if (finished_) throw IoError("append after finish on " + stem_);
  if (column.size() != rows_) throw IoError("column length mismatch writing " + stem_);
  const Eigen::VectorXd c = column;
  bin_.write(reinterpret_cast<const char*>(c.data()),
             static_cast<std::streamsize>(sizeof(double) * c.size()));
  if (!bin_) throw IoError("failed writing " + bin_path(stem_));
  ++cols_;
}

void MatrixWriter::finish(MatrixHeader header) {
  bin_.close();
  if (!bin_) throw IoError("failed closing " + bin_path(stem_));
  header.rows = rows_;
  header.cols = cols_;
  write_header(stem_, header);
  finished_ = true;
}

void write_matrix(const std::string& stem, const Eigen::MatrixXd& A, MatrixHeader header) {
  MatrixWriter w(stem, A.rows());
  for (Eigen::Index j = 0; j < A.cols(); ++j) w.append(A.col(j));
  w.finish(std::move(header));
}

MatrixHeader read_header(const std::string& stem) {
  std::ifstream in(hdr_path(stem));
  if (!in) throw IoError("missing header " + hdr_path(stem));
  in.imbue(std::locale::classic());
  MatrixHeader h;
  h.manifest = read_manifest(in);
  std::string line;
  bool have_rows = false, have_cols = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    std::string key;
    ls >> key;
    if (key == "rows") have_rows = static_cast<bool>(ls >> h.rows);
    else if (key == "cols") have_cols = static_cast<bool>(ls >> h.cols);
    else if (key == "mesh_hash") ls >> h.mesh_hash;
    else if (key == "times") for (double t; ls >> t;) h.times.push_back(t);
    else if (key == "values") for (double v; ls >> v;) h.values.push_back(v);
  }
  if (!have_rows || !have_cols || h.rows < 0 || h.cols < 0)
    throw IoError("malformed header " + hdr_path(stem));
  return h;
}

Eigen::MatrixXd read_matrix(const std::string& stem, MatrixHeader* header) {
  MatrixHeader h = read_header(stem);
  std::ifstream in(bin_path(stem), std::ios::binary | std::ios::ate);
  if (!in) throw IoError("missing data file " + bin_path(stem));
  const auto bytes = static_cast<long long>(in.tellg());
  const long long expected = static_cast<long long>(sizeof(double)) * h.rows * h.cols;
  if (bytes != expected)
    throw IoError(bin_path(stem) + " holds " + std::to_string(bytes) + " bytes, header expects " +
                  std::to_string(expected));
  if (h.rows == 0 || h.cols == 0) throw IoError(bin_path(stem) + " is empty");
  in.seekg(0);
  Eigen::MatrixXd A(h.rows, h.cols);
  in.read(reinterpret_cast<char*>(A.data()), static_cast<std::streamsize>(expected));
  if (!in) throw IoError("failed reading " + bin_path(stem));
  if (header) *header = std::move(h);
  return A;
}

MatrixReader::MatrixReader(const std::string& stem)
    : stem_(stem), header_(read_header(stem)), bin_(bin_path(stem), std::ios::binary | std::ios::ate) {
  if (!bin_) throw IoError("missing data file " + bin_path(stem));
  const auto bytes = static_cast<long long>(bin_.tellg());
  if (bytes != static_cast<long long>(sizeof(double)) * header_.rows * header_.cols)
    throw IoError(bin_path(stem) + " does not match its header");
  bin_.seekg(0);
}

bool MatrixReader::next(Eigen::VectorXd& column) {
  if (read_ >= header_.cols) return false;
  column.resize(header_.rows);
  bin_.read(reinterpret_cast<char*>(column.data()),
            static_cast<std::streamsize>(sizeof(double) * header_.rows));
  if (!bin_) throw IoError("failed reading " + bin_path(stem_));
  ++read_;
  return true;
}

void write_basis(const std::string& stem, const PodBasis& basis, MatrixHeader header) {
  header.values.assign(basis.singular_values.data(),
                       basis.singular_values.data() + basis.singular_values.size());
  header.manifest["variable"] = basis.variable;
  header.manifest["rank"] = std::to_string(basis.rank);
  MatrixWriter w(stem, basis.modes.rows());
  for (Eigen::Index j = 0; j < basis.modes.cols(); ++j) w.append(basis.modes.col(j));
  w.finish(std::move(header));
}

PodBasis read_basis(const std::string& stem, const std::string& variable) {
  MatrixHeader h;
  PodBasis b;
  b.variable = variable;
  b.modes = read_matrix(stem, &h);
  b.singular_values = Eigen::Map<const Eigen::VectorXd>(h.values.data(),
                                                        static_cast<Eigen::Index>(h.values.size()));
  const auto it = h.manifest.find("rank");
  if (it == h.manifest.end()) throw IoError(stem + ".hdr has no rank entry");
  b.rank = std::stoi(it->second);
  return b;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

void write_singular_values_csv(std::ostream& os, const PodBasis& q, const PodBasis& u,
                               const PodBasis& uhat, std::size_t max_rows) {
  os << "index,sigma_q,sigma_u,sigma_uhat\n";
  const auto len = [](const PodBasis& b) { return static_cast<std::size_t>(b.singular_values.size()); };
  const std::size_t n = std::min(max_rows, std::max({len(q), len(u), len(uhat)}));
  for (std::size_t i = 0; i < n; ++i) {
    os << (i + 1);
    for (const PodBasis* b : {&q, &u, &uhat}) {
      os << ',';
      if (i < len(*b)) os << csv_number(b->singular_values[static_cast<Eigen::Index>(i)]);
    }
    os << '\n';
  }
}

void write_error_table_csv(std::ostream& os, const std::vector<ErrorRow>& rows) {
  os << "r,q_error,u_error,lambda_tail_q,lambda_tail_u,lambda_tail_uhat,"
        "lambda_u,lambda_q,status\n";
  for (const ErrorRow& row : rows) {
    os << row.r;
    if (row.skipped) {
      os << ",,,,,,,,skipped: " << row.reason << '\n';
      continue;
    }
    const ErrorReport& e = row.report;
    for (double v : {e.q_error, e.u_error, e.tail_q, e.tail_u, e.tail_uhat, e.lambda_u,
                     e.lambda_q})
      os << ',' << csv_number(v);
    os << ",ok\n";
  }
}

}  // namespace hdgpod
