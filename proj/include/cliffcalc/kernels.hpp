#pragma once

#include <string>
#include <vector>

#include "cliffcalc/algebra.hpp"
#include "cliffcalc/jet.hpp"

namespace cliff {

struct SphereViolationError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ParameterRangeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct RatioError : std::domain_error {
  using std::domain_error::domain_error;
};

enum class KernelFamily { CauchyL, CauchyR, Fn, H, K, P, Monogenic };
enum class KernelForm { I, II };

/// Identifies one pointwise kernel.  `param` is l for H and P, alpha for K;
/// `side` selects left/right for Fn, K, P (H is two-sided); `form` applies
/// to the Cauchy kernels only.
struct KernelId {
  KernelFamily family = KernelFamily::CauchyL;
  Side side = Side::left;
  KernelForm form = KernelForm::II;
  int param = 0;
};

/// Q_{c,s}(x)^{-m} = (s^2 - 2 Re(x) s + |x|^2)^{-m} computed inside the
/// slice plane of s.  Throws SphereViolationError when s lies on [x].
Multivector qcs_inv_pow(const Paravector& s, const Paravector& x, int m);

/// Closed-form kernel value.  Preconditions: s not in [x] (x != 0 for the
/// monogenic kernel); param in the family's admissible range.
Multivector eval_kernel(const KernelId& id, const Paravector& s, const Paravector& x);

/// || form I - form II || for the left and right Cauchy kernels (max of the
/// two defects).
double kernel_forms_agree(const Paravector& s, const Paravector& x);

/// Partial sum of the kernel's power series through k = terms.  Requires
/// |x|/|s| <= 0.75.
Multivector eval_kernel_series(const KernelId& id, const Paravector& s, const Paravector& x,
                               int terms);

/// Jet (in x, around `center`) of the closed-form kernel, assembled from the
/// Q-jet reciprocal and ordered jet products — no differentiation involved.
Jet jet_of_kernel(const KernelId& id, const Paravector& s, const Paravector& center, int order);

/// D-bar^beta S_L^{-1}(s,x) in closed form; the two parities carry
/// different index patterns.
Multivector dbar_power_closed(int beta, const Paravector& s, const Paravector& x);

/// Names: dirac1, dirac2 (param m >= 0); laplace_power (param l in 0..h);
/// harm_kernel (l in 1..h); fueter_sce; hol_cliff (alpha in 1..h-1);
/// poly_kernel, poly_kernel_right (l in 0..h-1); dbar_power (beta in 1..h);
/// leibniz1 (alpha >= 1); regularity_F; regularity_H (l); regularity_P (l);
/// regularity_K (alpha).
const std::vector<std::string>& differential_identity_names();

/// Applies jets at x to the appropriate source kernel and compares with the
/// identity's closed form, coefficient by coefficient.  Returns the max
/// defect relative to the closed form's largest coefficient.
double verify_differential_identity(const std::string& name, const Paravector& s,
                                    const Paravector& x, int param = 0);

/// Central-difference residual of the Cauchy-Riemann system for the kernel
/// as a function of s = u + Iv on the slice of `s0`; returns the max
/// residual norm over the two equations.
double verify_slice_regularity_in_s(const KernelId& id, const Paravector& x, const SlicePoint& s0,
                                    double step = 1e-4);

/// For intrinsic kernels: how far the (alpha, beta) split is from being
/// real-valued at s0 (used for the H family).
double slice_split_nonreal(const KernelId& id, const Paravector& x, const SlicePoint& s0);

}  // namespace cliff
