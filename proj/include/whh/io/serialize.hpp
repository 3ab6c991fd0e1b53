#pragma once

// JSON persistence. Field order is fixed so output can be diffed.

#include "json.hpp"

#include "whh/factor/factorization.hpp"
#include "whh/symbol/gsymbol.hpp"

namespace whh::io {

using json = nlohmann::ordered_json;

json complex_pair(cplx z);
cplx complex_from(const json& j);

/// {"ap":[{"freq","re","im"}],"l0":[{"shift","num","den"}]}; polynomial
/// coefficients ascending, den monic.
json to_json(const GSymbol& a);
/// Inverse of to_json up to root-finding round-off.
GSymbol symbol_from_json(const json& j);

json to_json(const WHFactorization& f);
json to_json(const OperatorRecipe& r);

}  // namespace whh::io
