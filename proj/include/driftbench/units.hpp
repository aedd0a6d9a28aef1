#pragma once

#include <cmath>

// Working units across the library:
//   length um, time s, magnetic field mT, viscosity Pa*s,
//   dipole moment A*um^2, force N, torque N*um.
// The scale factors below absorb the SI prefixes so that formulas can be
// written directly in those units.

namespace driftbench {

// (A*um^2) * (mT/um) -> N   (dipole force in a field gradient)
inline constexpr double kForceNPerGradUnit = 1e-9;

// (A*um^2) * mT -> N*um     (dipole torque in a field)
inline constexpr double kTorqueNumPerFieldUnit = 1e-9;

// N / (Pa*s * um) -> um/s   (Stokes translation, drag 6*pi*eta*a)
// (N*um) / (Pa*s * um^3) -> rad/s  (Stokes rotation, drag 8*pi*eta*a^3)
inline constexpr double kMobilityScale = 1e12;

inline double stokes_translation_drag(double viscosity, double radius_um) {
    return 6.0 * M_PI * viscosity * radius_um;  // Pa*s*um
}

inline double stokes_rotation_drag(double viscosity, double radius_um) {
    return 8.0 * M_PI * viscosity * radius_um * radius_um * radius_um;  // Pa*s*um^3
}

// translation velocity (um/s) of a sphere under force F (N)
inline double velocity_from_force(double force_n, double viscosity, double radius_um) {
    return force_n * kMobilityScale / stokes_translation_drag(viscosity, radius_um);
}

// angular velocity (rad/s) of a sphere under torque (N*um)
inline double omega_from_torque(double torque_num, double viscosity, double radius_um) {
    return torque_num * kMobilityScale / stokes_rotation_drag(viscosity, radius_um);
}

// relaxation rate (1/s) of dipole alignment: m*B/(8*pi*eta*a^3) in working units
inline double alignment_rate(double moment_aum2, double field_mt, double viscosity,
                             double radius_um) {
    return omega_from_torque(moment_aum2 * field_mt * kTorqueNumPerFieldUnit, viscosity,
                             radius_um);
}

}  // namespace driftbench
