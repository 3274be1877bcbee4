#pragma once

#include <string>
#include <vector>

#include "hierband/sym_matrix.hpp"

namespace hierband {

/// Comma-separated observations, one row each; a single non-numeric first
/// row is treated as a header and skipped.
DataMatrix read_data_matrix(const std::string& path);

/// Square symmetric matrix from CSV (same header rule); symmetry enforced
/// to 1e-8 relative and mirrored on read.
SymMatrix read_sym_matrix(const std::string& path);

/// Full dense matrix, 17 significant digits per entry.
void write_sym_matrix(const SymMatrix& M, const std::string& path);

/// One integer label per row.
std::vector<int> read_labels(const std::string& path);

/// Rows of (l, m, w) for a custom weight table.
std::vector<std::vector<double>> read_weight_table(const std::string& path, int p);

/// printf("%.17g") — shared by every writer for round-trip fidelity.
std::string format_double(double v);

/// Write via temp file + rename so readers never observe partial output.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace hierband
