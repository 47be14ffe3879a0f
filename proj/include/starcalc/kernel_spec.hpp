#pragma once

#include <json.hpp>
#include <string>

#include "starcalc/star_element.hpp"

namespace starcalc {

/// Raised on malformed kernel descriptions; `path` points at the offending
/// field (e.g. "terms[1].coeff.separable[0].a").
class SpecError : public std::runtime_error {
  public:
    SpecError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

/// Kernel description format:
///   {
///     "domain": [lo, hi],
///     "terms": [{"order": k, "coeff": {"separable": [{"a": FnSpec, "b": FnSpec}]}}]
///   }
/// FnSpec is one of
///   {"poly": [c0, c1, ...]}   monomial coefficients
///   {"cheb": [c0, c1, ...]}   Chebyshev coefficients on the domain
///   {"builtin": "one" | "exp" | "expneg" | "sin" | "cos", "affine": [alpha, beta]}
/// meaning f(alpha x + beta); complex scalars are numbers or [re, im] pairs.
StarElement parse_kernel_spec(const nlohmann::json& j);
StarElement parse_kernel_spec_text(const std::string& text);

/// Inverse of parse: emits coefficients in the "cheb" basis.
nlohmann::json serialize_kernel_spec(const StarElement& d);

}  // namespace starcalc
