#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pdbary {

/// One optimizer step: CSV columns
/// step,elapsed_seconds,epsilon,rho,candidate_size,approx_energy,converged_energy
/// (the last column is empty when not evaluated).
struct TraceRow {
  std::size_t step = 0;
  double elapsedSeconds = 0.0;
  double epsilon = 0.0;
  double rho = 0.0;
  std::size_t candidateSize = 0;
  double approxEnergy = 0.0;
  std::optional<double> convergedEnergy;
};

using EnergyTrace = std::vector<TraceRow>;

inline constexpr const char* kTraceCsvHeader =
    "step,elapsed_seconds,epsilon,rho,candidate_size,approx_energy,converged_energy";

void formatTrace(const EnergyTrace& trace, std::ostream& out);
void writeTrace(const EnergyTrace& trace, const std::filesystem::path& path);
EnergyTrace parseTrace(std::istream& in, const std::string& source = "<stream>");

/// Wall-clock reader started at construction.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  std::chrono::steady_clock::time_point after(double seconds) const {
    return start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(seconds));
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace pdbary
