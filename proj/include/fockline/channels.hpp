#pragma once

#include "fockline/fock.hpp"

namespace fockline {

/// Beam-splitter reflectivities of the six lossy ports, all in [0,1].
/// Transmittance is 1 - r throughout.
struct LossConfig {
  double r_a2 = 0.0, r_b2 = 0.0;  // idler channels towards the Bell station
  double r_a1 = 0.0, r_b1 = 0.0;  // signal modes kept by Alice and Bob
  double r_d1 = 0.0, r_d2 = 0.0;  // detector ports behind the balanced BS

  void validate() const;
};

enum class LossBackend {
  kernel,   // binomial damping kernel applied directly to occupation pairs
  ancilla,  // materialize the loss BS ancilla and trace it out
};

/// Photon loss of reflectivity r on one mode. Trace preserving;
/// r = 0 is the identity, r = 1 resets the mode to vacuum.
FockDensityOperator loss_channel(const FockDensityOperator& rho, int mode, double r,
                                 LossBackend backend = LossBackend::kernel);

/// Balanced 50:50 beam splitter acting on modes (i, j); block-unitary within
/// each total-photon sector of the pair.
FockDensityOperator balanced_bs(const FockDensityOperator& rho, int mode_i, int mode_j);

/// Power attenuation to reflectivity: r = 1 - 10^{-dB/10}.
double db_to_reflectivity(double attenuation_db);

}  // namespace fockline
