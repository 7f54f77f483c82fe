#pragma once

#include "nlh/fields.hpp"

namespace nlh {

// In-place DFT over a cube with side `side` (first axis fastest).
// Forward kernel e^{-2 pi i jk/side}; neither direction is scaled.
void fft_cube(ComplexArray& data, int dim, int side, bool inverse);

// Smallest even size >= n whose only prime factors are 2, 3, 5.
int next_fft_size(int n);

}  // namespace nlh
