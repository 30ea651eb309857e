#ifndef BURRCE_FIT_RESULT_HPP
#define BURRCE_FIT_RESULT_HPP

#include <string_view>

namespace burrce {

enum class Method { Ce, Nr, Em };

constexpr std::string_view method_name(Method m) {
  switch (m) {
    case Method::Ce:
      return "ce";
    case Method::Nr:
      return "nr";
    case Method::Em:
      return "em";
  }
  return "?";
}

/// Outcome of one estimation run, shared by all three fitters.
struct FitResult {
  double c = 0.0;
  double k = 0.0;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  double seconds = 0.0;
  /// Set when no observation lies below 1, the condition under which the
  /// Burr XII MLE may fail to exist (Wingo's existence condition).
  bool wingo_warning = false;
};

}  // namespace burrce

#endif  // BURRCE_FIT_RESULT_HPP
