#pragma once

namespace kvn {

struct PhasePoint {
    double q = 0.0;
    double p = 0.0;
};

// Closed-form elastic-wall fold for the box [0, L]. Maps the unfolded free-flight
// coordinate x onto the triangle wave of period 2L; the momentum sign flips when
// an odd number of reflections has occurred.
PhasePoint billiard_fold(double x, double p, double length);

// Free flight from `start` for time t (either sign) with reflections at 0 and L.
PhasePoint billiard_flow(PhasePoint start, double t, double length, double mass);

}  // namespace kvn
