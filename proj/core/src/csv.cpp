#include "cap/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cap {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  // strip a trailing carriage return from the last cell
  if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r')
    cells.back().pop_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no, std::size_t col) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw std::invalid_argument("line " + std::to_string(line_no) + ", column " +
                                std::to_string(col + 1) + ": cannot parse '" + cell +
                                "' as a number");
  return v;
}

struct ParsedCsv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

ParsedCsv parse_stream(std::istream& in) {
  ParsedCsv out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    const auto cells = split_line(line);
    if (line_no == 1) {
      out.header = cells;
      if (out.header.size() < 2)
        throw std::invalid_argument("line 1: need at least two columns");
      continue;
    }
    if (cells.size() != out.header.size())
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(out.header.size()) + " columns, found " +
                                  std::to_string(cells.size()));
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) row[c] = parse_cell(cells[c], line_no, c);
    out.rows.push_back(std::move(row));
  }
  if (out.header.empty()) throw std::invalid_argument("line 1: missing header row");
  if (out.rows.empty()) throw std::invalid_argument("no data rows after the header");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

DatasetCsv read_dataset_csv(std::istream& in) {
  const ParsedCsv parsed = parse_stream(in);
  const bool has_mean = parsed.header.back() == "true_mean";
  const std::size_t width = parsed.header.size();
  const std::size_t p = width - (has_mean ? 2 : 1);
  if (p < 1) throw std::invalid_argument("no covariate columns before the response");

  DatasetCsv out;
  out.header = parsed.header;
  const auto n = static_cast<Eigen::Index>(parsed.rows.size());
  out.data.x.resize(n, static_cast<Eigen::Index>(p));
  out.data.y.resize(n);
  if (has_mean) out.true_mean = Vector(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = parsed.rows[static_cast<std::size_t>(i)];
    for (std::size_t c = 0; c < p; ++c)
      out.data.x(i, static_cast<Eigen::Index>(c)) = row[c];
    out.data.y[i] = row[p];
    if (has_mean) (*out.true_mean)[i] = row[p + 1];
  }
  out.data.validate();
  return out;
}

DatasetCsv read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  return read_dataset_csv(in);
}

RawCsv read_raw_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  const ParsedCsv parsed = parse_stream(in);
  RawCsv out;
  out.header = parsed.header;
  out.values.resize(static_cast<Eigen::Index>(parsed.rows.size()),
                    static_cast<Eigen::Index>(parsed.header.size()));
  for (std::size_t r = 0; r < parsed.rows.size(); ++r)
    for (std::size_t c = 0; c < parsed.header.size(); ++c)
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parsed.rows[r][c];
  return out;
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data,
                       const Vector* true_mean) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open " + path.string() + " for writing");
  for (Eigen::Index c = 0; c < data.p(); ++c) out << 'x' << (c + 1) << ',';
  out << 'y';
  if (true_mean) out << ",true_mean";
  out << '\n';
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index c = 0; c < data.p(); ++c) out << format_double(data.x(i, c)) << ',';
    out << format_double(data.y[i]);
    if (true_mean) out << ',' << format_double((*true_mean)[i]);
    out << '\n';
  }
}

void write_predictions_csv(const std::filesystem::path& path, const Vector& predictions) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open " + path.string() + " for writing");
  out << "prediction\n";
  for (Eigen::Index i = 0; i < predictions.size(); ++i)
    out << format_double(predictions[i]) << '\n';
}

}  // namespace cap
