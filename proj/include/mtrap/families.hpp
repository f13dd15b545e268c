#pragma once

#include <random>

#include "mtrap/minkowski.hpp"
#include "mtrap/surface.hpp"

namespace mtrap::families {

// Spacelike plane z = (u, v, 0, 0); H = 0, so not marginally trapped.
SurfacePatch plane(const Rect& domain = {0, 1, 0, 1});

// Round sphere of radius r in the spacelike hyperplane x4 = 0, in polar
// coordinates (theta, phi); H is spacelike.
SurfacePatch euclidean_sphere(double r = 1.0, const Rect& domain = {0.5, 2.5, 0.0, 3.0});

// Timelike plane z = (u, 0, 0, v).
SurfacePatch timelike_plane(const Rect& domain = {0, 1, 0, 1});

// Flat surface in the light cone
// z(p, q) = (R cos(p+q), R sin(p+q), R sinh(p-q), R cosh(p-q)).
// Marginally trapped with parallel mean curvature vector: nu = lambda = 0,
// mu = -1/(2R^2), beta = 0, and E = G = 2R^2 = 1/|mu|, so (p, q) are canonical
// principal parameters for the gauge c1 = c2 = -ln(sqrt(2) R).
SurfacePatch light_cone_torus(double R, const Rect& domain = {-1, 1, -1, 1});

// Gauge constants making (p, q) canonical for the light-cone torus.
double light_cone_gauge_constant(double R);

// Random Lorentz motion: product of rotations in the (e1,e2) and (e2,e3)
// planes and a boost in (e3,e4), followed by a translation.
LorentzMotion random_motion(std::mt19937_64& rng, double max_rapidity = 1.0, double max_shift = 2.0);

}  // namespace mtrap::families
