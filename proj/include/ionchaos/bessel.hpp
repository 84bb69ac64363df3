// Integer-order Bessel functions of the first kind for the resonance Hamiltonian.
#pragma once

#include <vector>

namespace ionchaos {

/// J_n(z), n >= 0, |z| < 700.  Miller downward recurrence normalized with
/// J_0 + 2 sum_k J_2k = 1.
double bessel_j(int n, double z);

/// dJ_n/dz = (J_{n-1} - J_{n+1}) / 2, with J_{-1} = -J_1.
double bessel_j_prime(int n, double z);

/// J_0(z) ... J_nmax(z) from a single recurrence sweep.
std::vector<double> bessel_j_sequence(int nmax, double z);

}  // namespace ionchaos
