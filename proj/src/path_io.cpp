#include "phi4/path_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "phi4/error.hpp"

namespace phi4 {

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), r.ptr);
}

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    fail(ErrorCode::parse, "bad number in path file: '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto p = line.find(',', start);
    out.push_back(line.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

}  // namespace

const FieldPath& PathFile::field(const std::string& name) const {
  const auto it = fields.find(name);
  if (it == fields.end()) fail(ErrorCode::invalid_argument, "path file has no field '" + name + "'");
  return it->second;
}

void write_path_file(const std::string& file, const PathFile& data) {
  const auto& h = data.header;
  if (h.fields.empty()) fail(ErrorCode::invalid_argument, "path file needs at least one field");
  std::size_t count = 0;
  const TorusGrid* grid = nullptr;
  for (const auto& name : h.fields) {
    const FieldPath& p = data.field(name);
    if (name.find(',') != std::string::npos) fail(ErrorCode::invalid_argument, "field names cannot contain ','");
    if (grid == nullptr) {
      count = p.size();
      if (count == 0) fail(ErrorCode::invalid_argument, "empty field path");
      grid = &p.snapshots.front().grid();
    }
    if (p.size() != count) fail(ErrorCode::misaligned, "fields of a path file must have equal length");
    for (const auto& s : p.snapshots) check_same_grid(*grid, s.grid());
  }

  nlohmann::ordered_json j;
  j["format"] = "phi4-path";
  j["version"] = 1;
  j["dim"] = grid->dim();
  j["cutoff"] = grid->cutoff();
  j["phys_points"] = grid->phys_points();
  j["spacing"] = h.spacing;
  j["dt"] = h.dt;
  j["horizon"] = h.horizon;
  j["alpha"] = h.alpha;
  j["mass"] = h.mass;
  j["c"] = h.c;
  j["burn_in"] = h.burn_in;
  j["seed"] = h.seed;
  j["ordering"] = "lexicographic k1 outer, k2 inner, -N..N";
  j["fields"] = h.fields;

  std::ofstream out(file, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot open '" + file + "' for writing");
  out << j.dump() << '\n';
  out << "index,t,field";
  for (std::size_t i = 0; i < grid->num_modes(); ++i) {
    const Mode k = grid->mode(i);
    const std::string label = grid->dim() == 1 ? std::to_string(k.k1)
                                               : std::to_string(k.k1) + "_" + std::to_string(k.k2);
    out << ",re_" << label << ",im_" << label;
  }
  out << '\n';
  for (std::size_t s = 0; s < count; ++s) {
    for (const auto& name : h.fields) {
      const FieldPath& p = data.fields.at(name);
      out << s << ',' << format_double(p.time(s)) << ',' << name;
      for (const Complex& c : p.snapshots[s].coeffs())
        out << ',' << format_double(c.real()) << ',' << format_double(c.imag());
      out << '\n';
    }
  }
  if (!out) fail(ErrorCode::io, "write to '" + file + "' failed");
}

PathFile read_path_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + file + "'");
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::parse, "path file is empty");

  PathFile data;
  PathHeader& h = data.header;
  try {
    const auto j = nlohmann::json::parse(line);
    if (j.at("format") != "phi4-path" || j.at("version") != 1)
      fail(ErrorCode::parse, "not a version 1 phi4 path file");
    h.dim = j.at("dim");
    h.cutoff = j.at("cutoff");
    h.phys_points = j.at("phys_points");
    h.spacing = j.at("spacing");
    h.dt = j.value("dt", 0.0);
    h.horizon = j.value("horizon", 0.0);
    h.alpha = j.value("alpha", 0.0);
    h.mass = j.value("mass", 1.0);
    h.c = j.value("c", 0.0);
    h.burn_in = j.value("burn_in", 0.0);
    h.seed = j.value("seed", std::uint64_t{0});
    h.fields = j.at("fields").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse, std::string("bad path file header: ") + e.what());
  }
  if (h.fields.empty()) fail(ErrorCode::parse, "path file lists no fields");
  const TorusGrid grid(h.dim, h.cutoff, h.phys_points);
  for (const auto& name : h.fields) {
    FieldPath& p = data.fields[name];
    p.spacing = h.spacing;
  }
  if (!std::getline(in, line) || line.rfind("index,t,field", 0) != 0)
    fail(ErrorCode::parse, "missing column line in path file");

  const std::size_t modes = grid.num_modes();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != 3 + 2 * modes) fail(ErrorCode::parse, "wrong column count in path file row");
    const auto index = static_cast<std::size_t>(parse_double(cols[0]));
    const std::string name(cols[2]);
    const auto it = data.fields.find(name);
    if (it == data.fields.end()) fail(ErrorCode::parse, "unknown field '" + name + "' in path file");
    if (index != it->second.size()) fail(ErrorCode::parse, "path file rows out of order");
    std::vector<Complex> c(modes);
    for (std::size_t k = 0; k < modes; ++k) c[k] = {parse_double(cols[3 + 2 * k]), parse_double(cols[4 + 2 * k])};
    try {
      it->second.snapshots.emplace_back(grid, std::move(c));
    } catch (const Error& e) {
      fail(ErrorCode::parse, std::string("bad field in path file: ") + e.what());
    }
  }
  const std::size_t count = data.fields.begin()->second.size();
  for (const auto& [name, p] : data.fields)
    if (p.size() != count || count == 0) fail(ErrorCode::parse, "fields in path file have unequal lengths");
  return data;
}

}  // namespace phi4
