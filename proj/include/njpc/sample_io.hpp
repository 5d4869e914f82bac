#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "njpc/core.hpp"

namespace njpc {

// CSV with header `i,w,z` and one row per observed failure.
void write_sample_csv(std::ostream& out, const NjpcSample& sample, int precision = 6);
NjpcSample read_sample_csv(std::istream& in);

// One lifetime per line; blank lines and '#' comments are skipped.
std::vector<double> read_lifetimes(std::istream& in);

NjpcSample read_sample_file(const std::string& path);
std::vector<double> read_lifetimes_file(const std::string& path);

}  // namespace njpc
