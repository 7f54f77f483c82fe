#include "nlh/fft.hpp"

#include <unsupported/Eigen/FFT>

#include <vector>

namespace nlh {

void fft_cube(ComplexArray& data, int dim, int side, bool inverse) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  const Eigen::Index n = side;
  std::vector<Complex> in(side), out(side);
  Eigen::Index total = 1;
  for (int d = 0; d < dim; ++d) total *= n;

  Eigen::Index stride = 1;
  for (int axis = 0; axis < dim; ++axis) {
    const Eigen::Index lines = total / n;
    for (Eigen::Index line = 0; line < lines; ++line) {
      // split the line id into the part below and above the axis
      const Eigen::Index lo = line % stride;
      const Eigen::Index hi = line / stride;
      const Eigen::Index base = lo + hi * stride * n;
      for (Eigen::Index j = 0; j < n; ++j) in[j] = data[base + j * stride];
      if (inverse)
        fft.inv(out.data(), in.data(), n);
      else
        fft.fwd(out.data(), in.data(), n);
      for (Eigen::Index j = 0; j < n; ++j) data[base + j * stride] = out[j];
    }
    stride *= n;
  }
}

int next_fft_size(int n) {
  for (int m = std::max(n, 2);; ++m) {
    if (m % 2) continue;
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace nlh
