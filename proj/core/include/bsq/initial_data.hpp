#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "bsq/state.hpp"

namespace bsq {

// Families: gaussian_hump, cosine_modes, solitary_like, random_bandlimited.
// One 64-bit seed per state; per-field streams derive as
// splitmix64(seed ^ field_tag) feeding a 64-bit xorshift-multiply generator,
// so a family draws identical fields for identical seeds on any platform.
struct InitSpec {
  std::string family = "gaussian_hump";
  double amplitude = 0.1;    // elevation amplitude
  double u_amplitude = 0.0;  // velocity amplitude (same shape / own draw)
  double width = 0.5;        // hump / pulse width
  double x0 = -1, y0 = -1;   // center, negative = box midpoint
  std::vector<int> modes = {1};
  std::vector<double> phases;  // per mode, defaults to 0
  int kmax = 8;                // random band limit
  double envelope_p = 0;       // random spectral envelope |xi|^{-p}
  std::uint64_t seed = 1;
  bool curl_free = false;  // project 2D velocity
};

std::uint64_t splitmix64(std::uint64_t x);

State make_initial_data(GridPtr g, const InitSpec& spec);

}  // namespace bsq
