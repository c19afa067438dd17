#include "pdbary/energy_trace.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "pdbary/diagram_io.hpp"
#include "pdbary/error.hpp"

namespace pdbary {

void formatTrace(const EnergyTrace& trace, std::ostream& out) {
  out << kTraceCsvHeader << '\n';
  for (const auto& row : trace) {
    out << row.step << ',' << formatReal(row.elapsedSeconds) << ',' << formatReal(row.epsilon)
        << ',' << formatReal(row.rho) << ',' << row.candidateSize << ','
        << formatReal(row.approxEnergy) << ',';
    if (row.convergedEnergy) out << formatReal(*row.convergedEnergy);
    out << '\n';
  }
}

void writeTrace(const EnergyTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write trace file " + path.string());
  formatTrace(trace, out);
}

EnergyTrace parseTrace(std::istream& in, const std::string& source) {
  EnergyTrace trace;
  std::string line;
  std::size_t lineNo = 0;
  if (!std::getline(in, line) || line != kTraceCsvHeader)
    throw ParseError(source, 1, "missing trace header");
  ++lineNo;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() != 7) throw ParseError(source, lineNo, "expected 7 columns");
    try {
      TraceRow row;
      row.step = std::stoull(cells[0]);
      row.elapsedSeconds = std::stod(cells[1]);
      row.epsilon = std::stod(cells[2]);
      row.rho = std::stod(cells[3]);
      row.candidateSize = std::stoull(cells[4]);
      row.approxEnergy = std::stod(cells[5]);
      if (!cells[6].empty()) row.convergedEnergy = std::stod(cells[6]);
      trace.push_back(row);
    } catch (const std::exception&) {
      throw ParseError(source, lineNo, "invalid number");
    }
  }
  return trace;
}

}  // namespace pdbary
