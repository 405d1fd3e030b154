#include "sgb/kernels.hpp"

namespace sgb::kernels {

namespace {

double weighted_sumsq(const double* w, const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * x[i];
  return s;
}

double weighted_dot(const double* w, const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

void scale(const double* w, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i] * x[i];
}

void damped_update(const double* damp, const double* x, double drift_coef, const double* drift,
                   const double* noise_w, const double* noise, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    if (drift) v += drift_coef * drift[i];
    if (noise) v += noise_w[i] * noise[i];
    out[i] = damp[i] * v;
  }
}

void convolve(const ConvolutionTables& t, FullFieldView u, FullFieldView v, double* out) {
  const int d = t.dimension;
  const std::size_t pairs = t.a_index.size();
  const std::size_t fe = t.full_extent;
  for (std::size_t l = 0; l < t.output_count; ++l) {
    double acc_re[2] = {0.0, 0.0};
    double acc_im[2] = {0.0, 0.0};
    for (std::uint32_t p = t.offsets[l]; p < t.offsets[l + 1]; ++p) {
      const std::size_t a = static_cast<std::size_t>(t.a_index[p]);
      const std::size_t b = static_cast<std::size_t>(t.b_index[p]);
      double s_re = 0.0;
      double s_im = 0.0;
      for (int c = 0; c < d; ++c) {
        const double m = t.m_coord[c * pairs + p];
        s_re += m * u.re[c * fe + a];
        s_im += m * u.im[c * fe + a];
      }
      for (int j = 0; j < d; ++j) {
        const double vr = v.re[j * fe + b];
        const double vi = v.im[j * fe + b];
        acc_re[j] += s_re * vr - s_im * vi;
        acc_im[j] += s_re * vi + s_im * vr;
      }
    }
    // multiply by i
    for (int j = 0; j < d; ++j) {
      out[2 * (l * d + j)] = -acc_im[j];
      out[2 * (l * d + j) + 1] = acc_re[j];
    }
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", weighted_sumsq, weighted_dot, scale, damped_update, convolve};
  return table;
}

}  // namespace sgb::kernels
