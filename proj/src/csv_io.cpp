#include "sasbell/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sasbell {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

[[noreturn]] void bad(int line_no, const std::string& what) {
  throw Error(ErrorKind::data_error, "line " + std::to_string(line_no) + ": " + what);
}

template <typename T>
T parse_cell(const std::string& cell, int line_no, const char* column) {
  T v{};
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
    bad(line_no, std::string("bad ") + column + " value '" + cell + "'");
  }
  return v;
}

// Data lines with their 1-based line numbers, after the header check.
std::vector<std::pair<int, std::string>> data_lines(std::string_view text, const char* header) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_header = false;
  std::vector<std::pair<int, std::string>> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      if (line != header) bad(line_no, "expected header '" + std::string(header) + "'");
      have_header = true;
      continue;
    }
    out.emplace_back(line_no, line);
  }
  if (!have_header) throw Error(ErrorKind::data_error, "missing header '" + std::string(header) + "'");
  return out;
}

}  // namespace

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  std::string s = buf;
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_metadata(const Metadata& meta) {
  std::string out;
  for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
  return out;
}

std::string format_counts_csv(const std::vector<CountsRow>& rows, const Metadata& meta) {
  std::string out = format_metadata(meta);
  out += kCountsHeader;
  out += '\n';
  for (const auto& r : rows) {
    const auto& s = r.setting;
    if (s.id.find_first_of(",\n#") != std::string::npos) {
      throw Error(ErrorKind::data_error, "setting id '" + s.id + "' is not CSV-safe");
    }
    out += s.id + ',' + format_fixed(s.stokes.hwp_deg, 4) + ',' + format_fixed(s.stokes.qwp_deg, 4) + ',' +
           format_fixed(s.antistokes.hwp_deg, 4) + ',' + format_fixed(s.antistokes.qwp_deg, 4) + ',' +
           std::to_string(r.counts.n_pp) + ',' + std::to_string(r.counts.n_pm) + ',' + std::to_string(r.counts.n_mp) +
           ',' + std::to_string(r.counts.n_mm) + ',' + std::to_string(r.counts.n_pulses) + '\n';
  }
  return out;
}

std::string format_histogram_csv(const DelayHistogram& h, const Metadata& meta) {
  std::string out = format_metadata(meta);
  out += kHistogramHeader;
  out += '\n';
  for (int k = -h.max_delay; k <= h.max_delay; ++k) out += std::to_string(k) + ',' + std::to_string(h.at(k)) + '\n';
  return out;
}

std::vector<CountsRow> parse_counts_csv(std::string_view text) {
  std::vector<CountsRow> rows;
  for (const auto& [line_no, line] : data_lines(text, kCountsHeader)) {
    const auto cells = split(line, ',');
    if (cells.size() != 10) bad(line_no, "expected 10 columns, got " + std::to_string(cells.size()));
    if (cells[0].empty()) bad(line_no, "empty setting_id");
    CountsRow r;
    r.setting.id = cells[0];
    r.setting.stokes = {parse_cell<double>(cells[1], line_no, "hwp_s_deg"), parse_cell<double>(cells[2], line_no, "qwp_s_deg")};
    r.setting.antistokes = {parse_cell<double>(cells[3], line_no, "hwp_as_deg"),
                            parse_cell<double>(cells[4], line_no, "qwp_as_deg")};
    r.counts.n_pp = parse_cell<std::uint64_t>(cells[5], line_no, "n_pp");
    r.counts.n_pm = parse_cell<std::uint64_t>(cells[6], line_no, "n_pm");
    r.counts.n_mp = parse_cell<std::uint64_t>(cells[7], line_no, "n_mp");
    r.counts.n_mm = parse_cell<std::uint64_t>(cells[8], line_no, "n_mm");
    r.counts.n_pulses = parse_cell<std::uint64_t>(cells[9], line_no, "n_pulses");
    rows.push_back(r);
  }
  if (rows.empty()) throw Error(ErrorKind::data_error, "counts file has no rows");
  return rows;
}

DelayHistogram parse_histogram_csv(std::string_view text) {
  std::vector<std::pair<int, std::uint64_t>> bins;
  for (const auto& [line_no, line] : data_lines(text, kHistogramHeader)) {
    const auto cells = split(line, ',');
    if (cells.size() != 2) bad(line_no, "expected 2 columns");
    bins.emplace_back(parse_cell<int>(cells[0], line_no, "delay_pulses"),
                      parse_cell<std::uint64_t>(cells[1], line_no, "counts"));
  }
  if (bins.empty() || bins.size() % 2 == 0) throw Error(ErrorKind::data_error, "histogram needs 2k+1 bins");
  DelayHistogram h(static_cast<int>(bins.size() / 2));
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (bins[i].first != static_cast<int>(i) - h.max_delay) {
      throw Error(ErrorKind::data_error, "histogram delays must run contiguously from -k to k");
    }
    h.counts[i] = bins[i].second;
  }
  return h;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::data_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::data_error, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::data_error, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::data_error, "cannot move output into place at " + path.string());
  }
}

}  // namespace sasbell
