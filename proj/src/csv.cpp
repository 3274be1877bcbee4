#include "hierband/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hierband {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& s, double& v) {
  const char* b = s.c_str();
  char* e = nullptr;
  errno = 0;
  v = std::strtod(b, &e);
  if (e == b || errno == ERANGE) return false;
  while (*e == ' ' || *e == '\t') ++e;
  return *e == '\0';
}

std::vector<std::vector<double>> read_numeric_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool ok = true;
    for (auto& f : fields) {
      double v;
      if (!parse_double(f, v)) {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw std::runtime_error(path + ": non-numeric field outside header row");
    }
    first = false;
    if (!rows.empty() && rows.back().size() != row.size())
      throw std::runtime_error(path + ": ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

DataMatrix read_data_matrix(const std::string& path) {
  auto rows = read_numeric_rows(path);
  DataMatrix X(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < X.n; ++i)
    for (int j = 0; j < X.p; ++j) X.at(i, j) = rows[i][j];
  return X;
}

SymMatrix read_sym_matrix(const std::string& path) {
  auto rows = read_numeric_rows(path);
  const int p = static_cast<int>(rows.size());
  if (static_cast<int>(rows[0].size()) != p) throw std::runtime_error(path + ": matrix must be square");
  double scale = 0.0;
  for (auto& r : rows)
    for (double v : r) scale = std::max(scale, std::abs(v));
  SymMatrix M(p);
  for (int j = 0; j < p; ++j)
    for (int k = j; k < p; ++k) {
      if (std::abs(rows[j][k] - rows[k][j]) > 1e-8 * std::max(1.0, scale))
        throw std::runtime_error(path + ": matrix is not symmetric");
      M.set(j, k, 0.5 * (rows[j][k] + rows[k][j]));
    }
  return M;
}

void write_sym_matrix(const SymMatrix& M, const std::string& path) {
  std::ostringstream os;
  const int p = M.dim();
  for (int j = 0; j < p; ++j) {
    for (int k = 0; k < p; ++k) {
      if (k) os << ',';
      os << format_double(M(j, k));
    }
    os << '\n';
  }
  write_text_atomic(path, os.str());
}

std::vector<int> read_labels(const std::string& path) {
  auto rows = read_numeric_rows(path);
  std::vector<int> y;
  y.reserve(rows.size());
  for (auto& r : rows) {
    if (r.size() != 1) throw std::runtime_error(path + ": labels must have one column");
    double v = r[0];
    int iv = static_cast<int>(std::lround(v));
    if (std::abs(v - iv) > 1e-9) throw std::runtime_error(path + ": labels must be integers");
    y.push_back(iv);
  }
  return y;
}

std::vector<std::vector<double>> read_weight_table(const std::string& path, int p) {
  auto rows = read_numeric_rows(path);
  std::vector<std::vector<double>> table(p - 1);
  for (int l = 1; l <= p - 1; ++l) table[l - 1].assign(l, -1.0);
  for (auto& r : rows) {
    if (r.size() != 3) throw std::runtime_error(path + ": expected rows of (l, m, w)");
    int l = static_cast<int>(std::lround(r[0]));
    int m = static_cast<int>(std::lround(r[1]));
    if (l < 1 || l > p - 1 || m < 1 || m > l)
      throw std::runtime_error(path + ": (l, m) out of range");
    table[l - 1][m - 1] = r[2];
  }
  for (int l = 1; l <= p - 1; ++l)
    for (int m = 1; m <= l; ++m)
      if (table[l - 1][m - 1] < 0)
        throw std::runtime_error(path + ": missing weight for l=" + std::to_string(l) + ", m=" + std::to_string(m));
  return table;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

}  // namespace hierband
