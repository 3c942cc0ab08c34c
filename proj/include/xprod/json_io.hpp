#ifndef XPROD_JSON_IO_HPP
#define XPROD_JSON_IO_HPP

/// JSON encodings for the persistent types.  Complex numbers are [re, im]
/// pairs; matrices are row-major nested arrays; see docs/schemas.md for
/// the full formats.  Parsing throws MalformedInput with a message naming
/// the offending field.

#include "json.hpp"

#include "xprod/covariant.hpp"
#include "xprod/element.hpp"
#include "xprod/interaction.hpp"

namespace xprod::io {

using nlohmann::json;

json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

/// Full element: {"block_dims": [...], "blocks": [...]}.
json to_json(const AlgebraElement& a);
/// Just the blocks array (the algebra is implied by context).
json blocks_to_json(const AlgebraElement& a);
AlgebraElement element_from_json(const FiniteCStarAlgebra& algebra, const json& blocks);

FiniteCStarAlgebra algebra_from_json(const json& j);
json to_json(const FiniteCStarAlgebra& algebra);

/// {"form": "conjugation", "K": blocks} or {"form": "superoperator", "matrix": [...]}.
json to_json(const LinearMapOnAlgebra& f);
LinearMapOnAlgebra map_from_json(const FiniteCStarAlgebra& algebra, const json& j);

/// {"algebra": ..., "V": ..., "H": ...}.
Interaction interaction_from_json(const json& j);

/// {"hilbert_dim": n, "sigma_images": [...], "U1": [...]}.
CovariantRep rep_from_json(const FiniteCStarAlgebra& algebra, const json& j, Tolerance tol = {});

/// {"block_dims": ..., "terms": [{"type": "pos"|"neg", "word": [{"coeff": blocks, "step": k}]}]}.
json to_json(const CrossedProductElement& a);
CrossedProductElement element_terms_from_json(const FiniteCStarAlgebra& algebra, const json& j);

json to_json(const NormEnclosure& e);

} // namespace xprod::io

#endif
