#include "njpc/sample_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace njpc {

namespace {

std::string strip(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSample("cannot open '" + path + "'");
  return in;
}

}  // namespace

void write_sample_csv(std::ostream& out, const NjpcSample& sample, int precision) {
  std::ostringstream buf;
  buf.precision(precision);
  buf << "i,w,z\n";
  for (std::size_t i = 0; i < sample.w.size(); ++i)
    buf << i + 1 << ',' << sample.w[i] << ',' << sample.z[i] << '\n';
  out << buf.str();
}

NjpcSample read_sample_csv(std::istream& in) {
  NjpcSample sample;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line == "i,w,z") continue;
      throw InvalidSample("line " + std::to_string(line_no) + ": expected header 'i,w,z'");
    }
    std::istringstream row(line);
    long index = 0;
    double w = 0.0;
    int z = 0;
    char c1 = 0;
    char c2 = 0;
    if (!(row >> index >> c1 >> w >> c2 >> z) || c1 != ',' || c2 != ',' ||
        !(row >> std::ws).eof())
      throw InvalidSample("line " + std::to_string(line_no) + ": expected 'i,w,z'");
    if (index != static_cast<long>(sample.w.size()) + 1)
      throw InvalidSample("line " + std::to_string(line_no) + ": rows must be numbered 1, 2, ...");
    sample.w.push_back(w);
    sample.z.push_back(z);
  }
  return sample;
}

std::vector<double> read_lifetimes(std::istream& in) {
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    std::istringstream row(line);
    double v = 0.0;
    if (!(row >> v) || !(row >> std::ws).eof() || !(v >= 0.0))
      throw InvalidSample("line " + std::to_string(line_no) + ": expected one non-negative lifetime");
    values.push_back(v);
  }
  return values;
}

NjpcSample read_sample_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_sample_csv(in);
}

std::vector<double> read_lifetimes_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_lifetimes(in);
}

}  // namespace njpc
