#pragma once

// Structured result documents. Every report is built as JSON; the text form
// is rendered from the same document so both carry identical content.

#include <string>

#include <json.hpp>

#include "sostensor/sos.hpp"
#include "sostensor/spectral.hpp"
#include "sostensor/structured.hpp"

namespace sostensor {

using Json = nlohmann::ordered_json;

// One record per class: name, holds, boundary, witness (and error for
// classes that need an even order when the order is odd).
Json classification_report(const SymmetricTensor& a, double tol = kClassTol);

// Cauchy generator recovered from the diagonal, when every entry matches.
std::optional<std::vector<double>> detect_cauchy(const SymmetricTensor& a, double tol = 1e-9);

Json sos_report(const SymmetricTensor& a, const SosResult& r);
// Basis exponents, lower triangle of each block Gram matrix, squares,
// residual and rank estimate.
Json certificate_document(const SosCertificate& c);
Json eigmin_report(const SymmetricTensor& a, const EigMinResult& r);
Json pd_report(const SymmetricTensor& a, const PdResult& r, double pd_tol);

// Indented "key: value" rendering; arrays of scalars stay on one line.
std::string render_text(const Json& doc);

}  // namespace sostensor
