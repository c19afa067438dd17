#include "pdbary/scalar_field.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pdbary/error.hpp"

namespace pdbary {

namespace {

constexpr char kMagic[8] = {'P', 'D', 'B', 'F', 'I', 'E', 'L', 'D'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& source) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ParseError(source, 0, "truncated field file");
  return value;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

ScalarField::ScalarField(std::size_t nx, std::size_t ny, std::size_t nz, double fill)
    : dimension(nz > 1 ? 3 : 2), extents{nx, ny, nz}, values(nx * ny * nz, fill) {}

std::array<std::size_t, 3> ScalarField::coordinates(std::size_t vertex) const noexcept {
  const std::size_t x = vertex % extents[0];
  const std::size_t rest = vertex / extents[0];
  return {x, rest % extents[1], rest / extents[1]};
}

Vec3 ScalarField::position(std::size_t vertex) const noexcept {
  const auto c = coordinates(vertex);
  return {static_cast<double>(c[0]) * spacing[0], static_cast<double>(c[1]) * spacing[1],
          static_cast<double>(c[2]) * spacing[2]};
}

void validate(const ScalarField& field) {
  if (field.dimension != 2 && field.dimension != 3)
    throw ValidationError("field dimension must be 2 or 3");
  if (field.dimension == 2 && field.extents[2] != 1)
    throw ValidationError("2D field must have a z extent of 1");
  for (int a = 0; a < field.dimension; ++a)
    if (field.extents[a] == 0) throw ValidationError("field extents must be positive");
  if (field.values.size() != field.vertexCount())
    throw ValidationError("field has " + std::to_string(field.values.size()) + " values for " +
                          std::to_string(field.vertexCount()) + " vertices");
  for (double s : field.spacing)
    if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("field spacing must be positive");
  for (double v : field.values)
    if (!std::isfinite(v)) throw ValidationError("field values must be finite");
}

ScalarField readField(const std::filesystem::path& path) {
  const std::string source = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open field file " + source);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw ParseError(source, 0, "not a PDBFIELD file");
  ScalarField field;
  field.dimension = static_cast<int>(get<std::uint32_t>(in, source));
  for (auto& e : field.extents) e = static_cast<std::size_t>(get<std::uint64_t>(in, source));
  for (auto& s : field.spacing) s = get<double>(in, source);
  const std::size_t count = field.extents[0] * field.extents[1] * field.extents[2];
  if (field.extents[0] == 0 || field.extents[1] == 0 || field.extents[2] == 0 || count > (1ULL << 32))
    throw ParseError(source, 0, "implausible field extents");
  field.values.resize(count);
  in.read(reinterpret_cast<char*>(field.values.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw ParseError(source, 0, "truncated field file");
  field.label = path.stem().string();
  try {
    validate(field);
  } catch (const ValidationError& e) {
    throw ParseError(source, 0, e.what());
  }
  return field;
}

void writeField(const ScalarField& field, const std::filesystem::path& path) {
  validate(field);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write field file " + path.string());
  out.write(kMagic, 8);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.dimension));
  for (auto e : field.extents) put<std::uint64_t>(out, static_cast<std::uint64_t>(e));
  for (double s : field.spacing) put<double>(out, s);
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!out) throw Error("failed writing field file " + path.string());
}

ScalarField parseFieldCsv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= t.size()) {
      const auto comma = t.find(',', start);
      const std::string cell = trim(std::string_view(t).substr(start, comma == std::string::npos ? t.size() - start : comma - start));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw ParseError(source, lineNo, "not a finite number: '" + cell + "'");
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(source, lineNo, "expected " + std::to_string(rows.front().size()) +
                                           " columns, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(source, 0, "empty field");
  ScalarField field(rows.front().size(), rows.size());
  for (std::size_t y = 0; y < rows.size(); ++y)
    for (std::size_t x = 0; x < rows[y].size(); ++x) field.at(x, y) = rows[y][x];
  return field;
}

ScalarField readFieldCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open field file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  ScalarField field = parseFieldCsv(buffer.str(), path.string());
  field.label = path.stem().string();
  return field;
}

ScalarField loadField(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? readFieldCsv(path) : readField(path);
}

ScalarField pointwiseMean(const std::vector<ScalarField>& fields) {
  if (fields.empty()) throw ValidationError("mean of an empty field list");
  const ScalarField& first = fields.front();
  validate(first);
  ScalarField mean = first;
  mean.label = "mean";
  std::fill(mean.values.begin(), mean.values.end(), 0.0);
  for (const auto& f : fields) {
    validate(f);
    if (f.dimension != first.dimension || f.extents != first.extents)
      throw ValidationError("field '" + f.label + "' does not share the grid of '" + first.label + "'");
    for (std::size_t v = 0; v < mean.values.size(); ++v) mean.values[v] += f.values[v];
  }
  const double count = static_cast<double>(fields.size());
  for (double& v : mean.values) v /= count;
  return mean;
}

}  // namespace pdbary
