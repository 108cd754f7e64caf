#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "degenspec/bounds.hpp"
#include "degenspec/schatten.hpp"
#include "degenspec/spectra.hpp"
#include "degenspec/surface.hpp"

namespace degenspec::io {

using json = nlohmann::ordered_json;

/// 17 significant digits, classic locale.
std::string format_double(double x);
/// FNV-1a 64-bit.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Rows of comma-separated cells with a header; numbers via format_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  std::string str() const;

 private:
  std::size_t columns_;
  std::string buf_;
};

json to_json(const SpectrumResult& r);
json to_json(const SingularSpectrum& s);
json to_json(const BsCheck& c);
json to_json(const DecayFit& f);
json to_json(const WeakCouplingFit& f);
json to_json(const BoundReport& r);
json to_json(const ClrStudy& s);
json to_json(const SchattenSweep& s);

std::string eigenvalues_csv(const SpectrumResult& r);
std::string mesh_csv(const SurfaceMesh& mesh);
/// theorem, instance, lhs, rhs, ratio, slope, pass
std::string summary_csv(const std::vector<BoundReport>& reports);

/// Dump with two-space indentation and a trailing newline.
std::string dump(const json& j);

}  // namespace degenspec::io
