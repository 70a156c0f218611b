#pragma once

#include "hdgpod/analysis.hpp"
#include "hdgpod/pod.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <cstddef>
#include <fstream>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdgpod {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sidecar header of a binary matrix file `<stem>.bin`, stored as `<stem>.hdr`.
///
/// The text header holds "# key=value" manifest lines followed by
///   rows R / cols C / mesh_hash H / times t_1 ... / values v_1 ...
/// where `values` is optional (singular values for mode files).
struct MatrixHeader {
  std::map<std::string, std::string> manifest;
  long rows = 0;
  long cols = 0;
  std::uint64_t mesh_hash = 0;
  std::vector<double> times;
  std::vector<double> values;
};

/// Column-by-column writer of a binary column-major double matrix.
class MatrixWriter {
 public:
  MatrixWriter(const std::string& stem, long rows);
  ~MatrixWriter();
  MatrixWriter(const MatrixWriter&) = delete;
  MatrixWriter& operator=(const MatrixWriter&) = delete;

  void append(const Eigen::Ref<const Eigen::VectorXd>& column);
  /// Writes the sidecar header; rows and cols are taken from the data.
  void finish(MatrixHeader header);
  [[nodiscard]] long cols() const { return cols_; }

 private:
  std::string stem_;
  long rows_;
  long cols_ = 0;
  std::ofstream bin_;
  bool finished_ = false;
};

/// Sequential column reader for matrices written by MatrixWriter.
class MatrixReader {
 public:
  explicit MatrixReader(const std::string& stem);
  [[nodiscard]] const MatrixHeader& header() const { return header_; }
  /// Reads the next column; returns false after the last one.
  bool next(Eigen::VectorXd& column);

 private:
  std::string stem_;
  MatrixHeader header_;
  std::ifstream bin_;
  long read_ = 0;
};

void write_matrix(const std::string& stem, const Eigen::MatrixXd& A, MatrixHeader header);
MatrixHeader read_header(const std::string& stem);
/// Reads the matrix, checking its size against the header. Throws IoError for
/// missing, truncated or empty files.
Eigen::MatrixXd read_matrix(const std::string& stem, MatrixHeader* header = nullptr);

/// Basis files `<stem>.bin/.hdr` with the singular values in the header.
void write_basis(const std::string& stem, const PodBasis& basis, MatrixHeader header);
PodBasis read_basis(const std::string& stem, const std::string& variable);

/// CSV number format: scientific, 9 significant digits.
std::string csv_number(double v);

/// `index,sigma_q,sigma_u,sigma_uhat`; shorter columns are left empty.
void write_singular_values_csv(std::ostream& os, const PodBasis& q, const PodBasis& u,
                               const PodBasis& uhat, std::size_t max_rows = SIZE_MAX);

/// Rows of the error table; skipped rows carry a reason instead of numbers.
struct ErrorRow {
  int r = 0;
  bool skipped = false;
  std::string reason;
  ErrorReport report;
};

/// `r,q_error,u_error,lambda_tail_q,lambda_tail_u,lambda_tail_uhat` followed by
/// the two Lambda columns and a status column. Timings are not written here so
/// that reruns produce identical files.
void write_error_table_csv(std::ostream& os, const std::vector<ErrorRow>& rows);

}  // namespace hdgpod
