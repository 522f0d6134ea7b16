#include "strata/grid_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace strata {

namespace {
constexpr const char* kMagic = "STRATAGRID1";

nlohmann::ordered_json group_to_json(const StratifiedGroup& g) {
  nlohmann::ordered_json jg;
  jg["name"] = g.name();
  std::vector<int> layers(g.dim());
  for (int i = 0; i < g.dim(); ++i) layers[i] = g.layer(i);
  jg["layers"] = layers;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& t : g.bracket_terms())
    rows.push_back({t.i + 1, t.j + 1, t.k + 1, t.c});   // 1-based on disk
  jg["brackets"] = rows;
  return jg;
}

StratifiedGroup group_from_json(const nlohmann::json& jg) {
  std::vector<BracketTerm> terms;
  for (const auto& row : jg.at("brackets"))
    terms.push_back({row[0].get<int>() - 1, row[1].get<int>() - 1,
                     row[2].get<int>() - 1, row[3].get<double>()});
  return StratifiedGroup::from_structure(jg.at("layers").get<std::vector<int>>(),
                                         std::move(terms),
                                         jg.value("name", "custom"));
}
}  // namespace

void save_grid_function(const GridFunction& f, const std::filesystem::path& file) {
  nlohmann::ordered_json hdr;
  hdr["group"] = group_to_json(f.spec().group);
  hdr["half_widths"] = f.spec().half_widths;
  hdr["points"] = f.spec().points;
  hdr["encoding"] = "float64-le-interleaved";
  hdr["count"] = f.size();
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << kMagic << "\n" << hdr.dump() << "\n";
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.size() * sizeof(cplx)));
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

GridFunction load_grid_function(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string magic, header;
  std::getline(in, magic);
  if (magic != kMagic)
    throw std::runtime_error(file.string() + " is not a grid-function file");
  std::getline(in, header);
  nlohmann::json hdr = nlohmann::json::parse(header);
  GridSpec spec = make_grid(group_from_json(hdr.at("group")),
                            hdr.at("half_widths").get<std::vector<double>>(),
                            hdr.at("points").get<std::vector<int>>());
  if (hdr.at("count").get<std::size_t>() != spec.total_nodes)
    throw std::runtime_error("grid-function file has inconsistent count");
  std::vector<cplx> vals(spec.total_nodes);
  in.read(reinterpret_cast<char*>(vals.data()),
          static_cast<std::streamsize>(vals.size() * sizeof(cplx)));
  if (!in) throw std::runtime_error("truncated grid-function file " + file.string());
  return GridFunction(std::move(spec), std::move(vals));
}

void export_grid_csv(const GridFunction& f, const std::filesystem::path& file) {
  std::FILE* out = std::fopen(file.string().c_str(), "w");
  if (!out) throw std::runtime_error("cannot write " + file.string());
  const GridSpec& s = f.spec();
  const int n = s.group.dim();
  for (int a = 0; a < n; ++a) std::fprintf(out, "x%d,", a + 1);
  std::fprintf(out, "re,im\n");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < s.total_nodes; ++i) {
    s.node_coords(i, x.data());
    for (int a = 0; a < n; ++a) std::fprintf(out, "%.12e,", x[a]);
    std::fprintf(out, "%.12e,%.12e\n", f[i].real(), f[i].imag());
  }
  std::fclose(out);
}

}  // namespace strata
