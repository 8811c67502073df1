#pragma once

// The three Hessian forms of a real-valued function at a point, acting on
// complex vectors under the fixed identification z_k = x_{2k-1} + i x_{2k}:
//
//   H(A,B) = 2 Re sum Q_{kl} A_k B_l + 2 sum L_{kl} A_k conj(B_l)
//   L_{kl} = f_{z_k zbar_l}   (Hermitian; the Levi form)
//   Q_{kl} = f_{z_k z_l}      (complex symmetric; the Levi complement)
//
// H(A,A) is the ordinary real Hessian quadratic form; for mixed arguments
// H(A,B) is the complexified variant whose imaginary part is 2 Im L(A,B),
// which is what makes H(A,B) + H(iA,iB) = 4 L(A,B) an exact identity.

#include <string>

#include "deltakit/linalg.hpp"

namespace dk {

struct HessianForms {
  int n = 0;           // complex dimension
  Vec base_point;      // 2n reals
  std::string source;  // function id, for reports
  Mat H;               // 2n x 2n real symmetric
  CMat L;              // n x n Hermitian
  CMat Q;              // n x n complex symmetric
};

// Wirtinger assembly from the real Hessian:
//   L_{kl} = [(H_{2k-1,2l-1} + H_{2k,2l}) + i (H_{2k-1,2l} - H_{2k,2l-1})] / 4
//   Q_{kl} = [(H_{2k-1,2l-1} - H_{2k,2l}) - i (H_{2k-1,2l} + H_{2k,2l-1})] / 4
HessianForms assemble_forms(const Mat& H, const Vec& base_point, std::string source);

enum class FormKind { H, L, Q };

// Bilinear / sesquilinear evaluation. Real-valued for H and L on (A,A).
cplx apply_form(const HessianForms& f, FormKind which, const CVec& A, const CVec& B);

// H(A,B) + H(iA,iB) - 4 L(A,B); exact algebra, so only rounding remains.
cplx four_levi_residual(const HessianForms& f, const CVec& A, const CVec& B);

// Complex gradient <df(p), V> = sum f_{z_k} V_k from the real gradient.
cplx complex_pairing(const Vec& grad, const CVec& V);

// f_{z_k} entries as a vector.
CVec complex_gradient(const Vec& grad);

// Real symmetric matrix of the Levi form as a quadratic form on R^{2n}:
// 4 L(V,V) = H(V,V) + H(iV,iV)  =>  L_R = (H + J^T H J) / 4.
Mat levi_real_matrix(const Mat& H);

}  // namespace dk
