#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsedom/biparam.hpp"
#include "sparsedom/grid.hpp"
#include "sparsedom/haar_shift.hpp"
#include "sparsedom/line.hpp"
#include "sparsedom/martingale.hpp"
#include "sparsedom/sparse_family.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom {

// Text codecs. JSON output is compact with sorted keys; non-finite numbers are
// written as the strings "inf", "-inf" and "nan".

std::string to_json(const GridFunction& f);  // {"depth": N, "values": [...]}
GridFunction grid_function_from_json(const std::string& text);
std::string to_csv(const GridFunction& f);  // one leaf value per row
GridFunction grid_function_from_csv(const std::string& text);

// {"levels": [{"level": k, "values": [...]}]}, one value per level-(k-1) cube; level 0 holds sigma_0 (default 1).
std::string to_json(const PredictableSigns& s);
PredictableSigns signs_from_json(const std::string& text, GridPtr g);

std::string to_json(const HaarShiftSpec& spec);
HaarShiftSpec haar_spec_from_json(const std::string& text);

// Adapted: {"levels": [{"k": k, "cubes": [[level, index], ...]}]};
// flat: {"sets": [{"mask": base64, "witness": base64}]}, bit i of the mask for cell i.
std::string to_json(const SparseFamily& s);
SparseFamily family_from_json(const std::string& text, GridPtr g);

std::string to_json(const DominationReport& r);
DominationReport report_from_json(const std::string& text);

// {"kind": "power", "eps": e} or {"grid": N, "values": [...]}
std::string to_json(const Weight& w);
Weight weight_from_json(const std::string& text);

// {"kind": "hilbert" | "smoothed-power", "s": s, "CK": c}
std::string to_json(const CZKernelSpec& k);
CZKernelSpec kernel_from_json(const std::string& text);

std::string to_csv(const LineFunction& f);  // x_midpoint,value
LineFunction line_function_from_csv(const std::string& text);

// Row-major values with header "n1,n2" and a first row holding the exponents.
std::string product_to_csv(const ProductGrid& pg, const std::vector<double>& f);
std::vector<double> product_from_csv(const std::string& text, ProductGrid& pg);
std::string rectangles_to_csv(const std::vector<Rectangle>& rects);  // k1,i1,k2,i2,average

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

// Named generators: constant, haar, indicator, random-uniform, random-signed, random-heavy.
// Random values are integers in [0, 1000], [-1000, 1000] or +-2^[0, 20], so dyadic averages stay exact.
GridFunction generate_function(const std::string& name, int depth, std::uint64_t seed, double param = 1.0);
std::vector<std::string> generator_names();

}  // namespace sparsedom
