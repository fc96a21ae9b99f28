#include "sparsedom/io.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "json.hpp"

namespace sparsedom {

using nlohmann::json;

namespace {

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double get_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw std::invalid_argument("expected a number");
}

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> get_numbers(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(get_num(x));
  return v;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

json cube_json(const Cube& q) { return json::array({q.level, q.index}); }
Cube get_cube(const json& j) { return Cube{j.at(0).get<int>(), j.at(1).get<std::int64_t>()}; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number in CSV: " + s);
  }
}

int depth_of(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  if ((std::size_t{1} << k) != n) throw std::invalid_argument("value count is not a power of two");
  return k;
}

std::vector<std::uint8_t> mask_bytes(const std::vector<std::uint32_t>& cells, std::size_t n) {
  std::vector<std::uint8_t> b((n + 7) / 8, 0);
  for (auto c : cells) b[c / 8] |= static_cast<std::uint8_t>(1u << (c % 8));
  return b;
}

std::vector<std::uint32_t> mask_cells(const std::vector<std::uint8_t>& b, std::size_t n) {
  std::vector<std::uint32_t> cells;
  for (std::size_t c = 0; c < n && c / 8 < b.size(); ++c)
    if (b[c / 8] >> (c % 8) & 1u) cells.push_back(static_cast<std::uint32_t>(c));
  return cells;
}

}  // namespace

std::string to_json(const GridFunction& f) {
  return json{{"depth", f.grid->depth()}, {"values", numbers(f.values)}}.dump();
}

GridFunction grid_function_from_json(const std::string& text) {
  auto j = parse(text);
  auto v = get_numbers(j.at("values"));
  const int depth = j.at("depth").get<int>();
  if (v.size() != (std::size_t{1} << depth)) throw std::invalid_argument("values do not match depth");
  return GridFunction(build_grid(depth), std::move(v));
}

std::string to_csv(const GridFunction& f) {
  std::string out;
  for (double v : f.values) out += fmt(v) + "\n";
  return out;
}

GridFunction grid_function_from_csv(const std::string& text) {
  std::vector<double> v;
  for (const auto& l : lines(text)) v.push_back(parse_double(l));
  const int depth = depth_of(v.size());
  return GridFunction(build_grid(depth), std::move(v));
}

std::string to_json(const PredictableSigns& s) {
  json levels = json::array();
  for (std::size_t k = 0; k < s.values.size(); ++k)
    levels.push_back({{"level", k}, {"values", numbers(s.values[k])}});
  return json{{"levels", levels}}.dump();
}

PredictableSigns signs_from_json(const std::string& text, GridPtr g) {
  auto j = parse(text);
  PredictableSigns s = PredictableSigns::constant(g, 0.0);
  s.values[0] = {1.0};  // sigma_0 multiplies E_0 f; kept unless the file sets it
  for (const auto& lv : j.at("levels")) {
    const int k = lv.at("level").get<int>();
    if (k < 0 || k > g->depth()) throw std::invalid_argument("sign level outside the grid");
    auto v = get_numbers(lv.at("values"));
    if (v.size() != s.values[k].size()) throw std::invalid_argument("sign values need one per level-(k-1) cube");
    s.values[k] = std::move(v);
  }
  s.bound = s.sup_abs();
  s.validate();
  return s;
}

std::string to_json(const HaarShiftSpec& spec) {
  json alpha = json::array();
  for (const auto& c : spec.alpha)
    alpha.push_back({{"q", cube_json(c.q)}, {"t", cube_json(c.t)}, {"s", cube_json(c.s)}, {"value", num(c.value)}});
  return json{{"t", spec.t}, {"s", spec.s}, {"alpha", alpha}}.dump();
}

HaarShiftSpec haar_spec_from_json(const std::string& text) {
  auto j = parse(text);
  HaarShiftSpec spec;
  spec.t = j.at("t").get<int>();
  spec.s = j.at("s").get<int>();
  for (const auto& a : j.at("alpha"))
    spec.alpha.push_back({get_cube(a.at("q")), get_cube(a.at("t")), get_cube(a.at("s")), get_num(a.at("value"))});
  return spec;
}

std::string to_json(const SparseFamily& s) {
  json out;
  out["eta"] = json::array({s.eta.num, s.eta.den});
  if (s.is_flat()) {
    const auto& fl = *s.flat;
    const std::size_t n = fl.cell_measure.size();
    json sets = json::array();
    for (std::size_t i = 0; i < fl.sets.size(); ++i) {
      json e{{"mask", base64_encode(mask_bytes(fl.sets[i].cells, n))}, {"value", num(fl.sets[i].value)}};
      if (!fl.sets[i].label.empty()) e["label"] = fl.sets[i].label;
      if (i < fl.witnesses.size()) e["witness"] = base64_encode(mask_bytes(fl.witnesses[i], n));
      sets.push_back(e);
    }
    out["cells"] = n;
    out["sets"] = sets;
    return out.dump();
  }
  json levels = json::array();
  for (std::size_t k = 0; k < s.levels.size(); ++k) {
    if (s.levels[k].empty()) continue;
    json cubes = json::array();
    for (auto i : s.levels[k]) cubes.push_back(json::array({static_cast<int>(k), i}));
    levels.push_back({{"k", k}, {"cubes", cubes}});
  }
  out["levels"] = levels;
  return out.dump();
}

SparseFamily family_from_json(const std::string& text, GridPtr g) {
  auto j = parse(text);
  SparseFamily s = SparseFamily::adapted(g);
  if (j.contains("eta")) s.eta = Ratio{j["eta"].at(0).get<std::int64_t>(), j["eta"].at(1).get<std::int64_t>()};
  if (j.contains("sets")) {
    FlatFamily fl;
    fl.cell_measure = g->leaf_measures();
    const std::size_t n = fl.cell_measure.size();
    bool witnessed = true;
    for (const auto& e : j["sets"]) {
      FlatSet set;
      set.cells = mask_cells(base64_decode(e.at("mask").get<std::string>()), n);
      if (e.contains("value")) set.value = get_num(e["value"]);
      if (e.contains("label")) set.label = e["label"].get<std::string>();
      fl.sets.push_back(std::move(set));
      if (e.contains("witness"))
        fl.witnesses.push_back(mask_cells(base64_decode(e["witness"].get<std::string>()), n));
      else
        witnessed = false;
    }
    if (!witnessed) fl.witnesses.clear();
    s.flat = std::move(fl);
    return s;
  }
  for (const auto& lv : j.at("levels")) {
    const int k = lv.at("k").get<int>();
    for (const auto& c : lv.at("cubes")) {
      Cube q = get_cube(c);
      if (q.level != k) throw std::invalid_argument("adapted family cube at the wrong level");
      s.add(q);
    }
  }
  s.normalize();
  return s;
}

std::string to_json(const DominationReport& r) {
  json m = json::object();
  for (const auto& [k, v] : r.measured) m[k] = num(v);
  json out{{"inequality", r.inequality},
           {"best_constant", num(r.best_constant)},
           {"witness", r.witness},
           {"proof_constant", r.proof_constant ? num(*r.proof_constant) : json(nullptr)},
           {"pass", r.pass},
           {"measured", m},
           {"notes", r.notes}};
  return out.dump();
}

DominationReport report_from_json(const std::string& text) {
  auto j = parse(text);
  DominationReport r;
  r.inequality = j.at("inequality").get<std::string>();
  r.best_constant = get_num(j.at("best_constant"));
  r.witness = j.at("witness").get<std::size_t>();
  if (!j.at("proof_constant").is_null()) r.proof_constant = get_num(j["proof_constant"]);
  r.pass = j.at("pass").get<bool>();
  for (const auto& [k, v] : j.at("measured").items()) r.measured[k] = get_num(v);
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

std::string to_json(const Weight& w) {
  switch (w.kind) {
    case WeightKind::constant:
      return json{{"kind", "constant"}, {"scale", num(w.scale)}}.dump();
    case WeightKind::flat_bump:
      return json{{"kind", "flat-bump"}, {"eps", num(w.eps)}, {"bump_end", num(w.bump_end)}}.dump();
    case WeightKind::power:
      return json{{"kind", "power"}, {"eps", num(w.eps)}}.dump();
    case WeightKind::grid:
      return json{{"grid", depth_of(w.density.size())}, {"values", numbers(w.density)}}.dump();
  }
  throw std::logic_error("unknown weight kind");
}

Weight weight_from_json(const std::string& text) {
  auto j = parse(text);
  if (j.contains("grid")) {
    auto v = get_numbers(j.at("values"));
    if (v.size() != (std::size_t{1} << j["grid"].get<int>())) throw std::invalid_argument("values do not match grid");
    return Weight::from_grid(std::move(v));
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "constant") return Weight::constant(j.contains("scale") ? get_num(j["scale"]) : 1.0);
  if (kind == "flat-bump")
    return Weight::flat_bump(get_num(j.at("eps")), j.contains("bump_end") ? get_num(j["bump_end"]) : 0.5);
  if (kind == "power") return Weight::power(get_num(j.at("eps")));
  throw std::invalid_argument("unknown weight kind: " + kind);
}

std::string to_json(const CZKernelSpec& k) {
  json out{{"kind", k.name()}, {"s", num(k.s)}, {"CK", num(k.ck)}};
  if (k.kind == KernelKind::smoothed_power) out["smooth"] = num(k.smooth);
  return out.dump();
}

CZKernelSpec kernel_from_json(const std::string& text) {
  auto j = parse(text);
  const auto kind = j.at("kind").get<std::string>();
  const double s = j.contains("s") ? get_num(j["s"]) : 1.0;
  CZKernelSpec k;
  if (kind == "hilbert")
    k = CZKernelSpec::hilbert(s);
  else if (kind == "smoothed-power")
    k = CZKernelSpec::smoothed_power(s, j.contains("smooth") ? get_num(j["smooth"]) : 0.01);
  else
    throw std::invalid_argument("unknown kernel kind: " + kind);
  if (j.contains("CK")) k.ck = get_num(j["CK"]);
  return k;
}

std::string to_csv(const LineFunction& f) {
  std::string out = "x_midpoint,value\n";
  for (std::size_t i = 0; i < f.size(); ++i) out += fmt(f.grid.mid(i)) + "," + fmt(f[i]) + "\n";
  return out;
}

LineFunction line_function_from_csv(const std::string& text) {
  std::vector<double> xs, vs;
  for (const auto& l : lines(text)) {
    if (l.rfind("x_midpoint", 0) == 0) continue;
    const auto comma = l.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("line CSV rows need x,value");
    xs.push_back(parse_double(l.substr(0, comma)));
    vs.push_back(parse_double(l.substr(comma + 1)));
  }
  if (xs.size() < 2) throw std::invalid_argument("line CSV needs at least two rows");
  const double h = xs[1] - xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (std::fabs(xs[i] - xs[0] - h * static_cast<double>(i)) > 1e-9 * std::max(1.0, std::fabs(xs[i])))
      throw std::invalid_argument("line CSV midpoints are not uniform");
  LineGrid g(xs[0] - h / 2, xs[0] - h / 2 + h * static_cast<double>(xs.size()), xs.size());
  return LineFunction(g, std::move(vs));
}

std::string product_to_csv(const ProductGrid& pg, const std::vector<double>& f) {
  std::string out = "n1,n2\n" + std::to_string(pg.n1) + "," + std::to_string(pg.n2) + "\n";
  const std::size_t cols = std::size_t{1} << pg.n2;
  for (std::size_t i1 = 0; i1 < (std::size_t{1} << pg.n1); ++i1) {
    for (std::size_t i2 = 0; i2 < cols; ++i2) out += (i2 ? "," : "") + fmt(f[pg.cell(i1, i2)]);
    out += "\n";
  }
  return out;
}

std::vector<double> product_from_csv(const std::string& text, ProductGrid& pg) {
  auto ls = lines(text);
  if (ls.size() < 2 || ls[0] != "n1,n2") throw std::invalid_argument("product CSV needs the n1,n2 header");
  const auto comma = ls[1].find(',');
  pg.n1 = std::stoi(ls[1].substr(0, comma));
  pg.n2 = std::stoi(ls[1].substr(comma + 1));
  const std::size_t rows = std::size_t{1} << pg.n1, cols = std::size_t{1} << pg.n2;
  if (ls.size() != rows + 2) throw std::invalid_argument("product CSV row count mismatch");
  std::vector<double> f(pg.cells());
  for (std::size_t i1 = 0; i1 < rows; ++i1) {
    std::istringstream row(ls[i1 + 2]);
    std::string cell;
    std::size_t i2 = 0;
    while (std::getline(row, cell, ',')) {
      if (i2 >= cols) throw std::invalid_argument("product CSV column count mismatch");
      f[pg.cell(i1, i2++)] = parse_double(cell);
    }
    if (i2 != cols) throw std::invalid_argument("product CSV column count mismatch");
  }
  return f;
}

std::string rectangles_to_csv(const std::vector<Rectangle>& rects) {
  std::string out = "k1,i1,k2,i2,average\n";
  for (const auto& r : rects)
    out += std::to_string(r.a.level) + "," + std::to_string(r.a.index) + "," + std::to_string(r.b.level) + "," +
           std::to_string(r.b.index) + "," + fmt(r.average) + "\n";
  return out;
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw std::invalid_argument("base64 length must be a multiple of 4");
  std::vector<std::uint8_t> out(3 * text.size() / 4);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw std::invalid_argument("invalid base64");
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

GridFunction generate_function(const std::string& name, int depth, std::uint64_t seed, double param) {
  auto g = build_grid(depth);
  const std::size_t n = g->leaf_count();
  std::vector<double> v(n, 0.0);
  if (name == "constant") {
    std::fill(v.begin(), v.end(), param);
  } else if (name == "haar" || name == "indicator") {
    // supported on the cube (param, 0)
    const int level = std::max(0, std::min(depth, static_cast<int>(param)));
    const std::size_t len = n >> level;
    for (std::size_t i = 0; i < len; ++i) v[i] = (name == "indicator" || i < len / 2) ? 1.0 : -1.0;
    if (name == "haar" && len < 2) throw std::invalid_argument("haar generator needs a cube above the leaves");
  } else if (name == "random-uniform" || name == "random-signed") {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(name == "random-signed" ? -1000 : 0, 1000);
    for (auto& x : v) x = dist(rng);
  } else if (name == "random-heavy") {
    // +-2^k with k uniform in [0, 20]: heavy tails, still exact dyadic averages
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(0, 41);
    for (auto& x : v) {
      const int d = dist(rng);
      x = (d % 2 ? -1.0 : 1.0) * std::ldexp(1.0, d / 2);
    }
  } else {
    throw std::invalid_argument("unknown generator: " + name);
  }
  return GridFunction(g, std::move(v));
}

std::vector<std::string> generator_names() {
  return {"constant", "haar", "indicator", "random-uniform", "random-signed", "random-heavy"};
}

}  // namespace sparsedom
