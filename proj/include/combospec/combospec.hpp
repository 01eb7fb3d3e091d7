#pragma once

#include <string_view>

#include "combospec/bench.hpp"
#include "combospec/combo.hpp"
#include "combospec/csv.hpp"
#include "combospec/matrix.hpp"
#include "combospec/multiobj.hpp"
#include "combospec/parallel.hpp"
#include "combospec/pca.hpp"
#include "combospec/rng.hpp"
#include "combospec/svd.hpp"

namespace combospec {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace combospec
