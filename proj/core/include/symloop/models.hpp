#pragma once

#include "symloop/dpw.hpp"
#include "symloop/geometry.hpp"
#include "symloop/symmetry.hpp"

// Closed-form data for the 3-symmetric Clifford example on F_{1,1,1}: the
// cyclic matrix A, the vacuum solution, the graded potentials and the
// detwisted loop Psi.
namespace symloop::models {

// Entries 1/2 where i - j = 1 mod 3.
Matrix f111_a();
FlagPoint f111_flag();
TwistedAutomorphism f111_automorphism(int sample_count = kDefaultSampleCount);

// lambda^{-1} A dz.
Potential f111_potential();

// exp(z (lambda^{-1} - 1) A - conj(z) (lambda - 1) A^*) and its z, zbar derivatives.
MatrixLoop vacuum(cplx z, int sample_count = kDefaultSampleCount);
MatrixLoop vacuum_dz(cplx z, int sample_count = kDefaultSampleCount);
MatrixLoop vacuum_dzbar(cplx z, int sample_count = kDefaultSampleCount);

// exp(z A + conj(z) (lambda - 1) A^*), the disc-holomorphic factor of exp(lambda^{-1} z A).
MatrixLoop vacuum_b(cplx z, int sample_count = kDefaultSampleCount);

// The displayed potentials xi_0, xi_1, xi_2 and the 2-symmetric xi tilde.
Potential f111_xi(int j);
Potential f111_xi_tilde();

// exp(z xi_2 - conj(z) xi_2^*) exp(-z A + conj(z) A^*) and derivatives.
MatrixLoop f111_psi(cplx z, int sample_count = kDefaultSampleCount);
MatrixLoop f111_psi_dz(cplx z, int sample_count = kDefaultSampleCount);
MatrixLoop f111_psi_dzbar(cplx z, int sample_count = kDefaultSampleCount);

// exp(z A - conj(z) A^*).
Matrix f111_rotation(cplx z);
// exp(zA - conj(z)A^*) E_13 exp(-zA + conj(z)A^*), E_13 the (1,3) matrix unit.
Matrix f111_apsi_displayed(cplx z);

// The unitary lift g(z) with columns F, F', F'' of the Clifford frame, and dg/dz.
Matrix f111_lift(cplx z);
Matrix f111_lift_dz(cplx z);

// Projector onto pi_{A_0} + ... + pi_{A_j}.
Matrix f111_partial_flag(int j);

// The frame exp(zA - conj(z)A^*) [u_0 .. u_j] of exp(zA - conj(z)A^*)(A_0 + ... + A_j).
AnalyticFrame f111_alpha_frame(int j);

}  // namespace symloop::models
