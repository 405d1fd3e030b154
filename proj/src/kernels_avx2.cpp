// AVX2 + FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; nothing here runs unless the dispatcher confirmed CPU support.

#include "sgb/kernels.hpp"

#include <immintrin.h>

namespace sgb::kernels {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double weighted_sumsq(const double* w, const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d x0 = _mm256_loadu_pd(x + i);
    const __m256d x1 = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), x0), x0, acc0);
    acc1 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i + 4), x1), x1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(x + i);
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), x0), x0, acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += w[i] * x[i] * x[i];
  return s;
}

double weighted_dot(const double* w, const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i)),
                           _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(x + i + 4)),
                           _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i)),
                           _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

void scale(const double* w, const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = w[i] * x[i];
}

void damped_update(const double* damp, const double* x, double drift_coef, const double* drift,
                   const double* noise_w, const double* noise, double* out, std::size_t n) {
  const __m256d c = _mm256_set1_pd(drift_coef);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    if (drift) v = _mm256_fmadd_pd(c, _mm256_loadu_pd(drift + i), v);
    if (noise) v = _mm256_fmadd_pd(_mm256_loadu_pd(noise_w + i), _mm256_loadu_pd(noise + i), v);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(damp + i), v));
  }
  for (; i < n; ++i) {
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
    const std::size_t begin = t.offsets[l];
    const std::size_t end = t.offsets[l + 1];
    __m256d acc_re[2] = {_mm256_setzero_pd(), _mm256_setzero_pd()};
    __m256d acc_im[2] = {_mm256_setzero_pd(), _mm256_setzero_pd()};
    std::size_t p = begin;
    for (; p + 4 <= end; p += 4) {
      const __m128i a = _mm_loadu_si128(reinterpret_cast<const __m128i*>(t.a_index.data() + p));
      const __m128i b = _mm_loadu_si128(reinterpret_cast<const __m128i*>(t.b_index.data() + p));
      __m256d s_re = _mm256_setzero_pd();
      __m256d s_im = _mm256_setzero_pd();
      for (int c = 0; c < d; ++c) {
        const __m256d m = _mm256_loadu_pd(t.m_coord.data() + c * pairs + p);
        s_re = _mm256_fmadd_pd(m, _mm256_i32gather_pd(u.re + c * fe, a, 8), s_re);
        s_im = _mm256_fmadd_pd(m, _mm256_i32gather_pd(u.im + c * fe, a, 8), s_im);
      }
      for (int j = 0; j < d; ++j) {
        const __m256d vr = _mm256_i32gather_pd(v.re + j * fe, b, 8);
        const __m256d vi = _mm256_i32gather_pd(v.im + j * fe, b, 8);
        acc_re[j] = _mm256_fmadd_pd(s_re, vr, acc_re[j]);
        acc_re[j] = _mm256_fnmadd_pd(s_im, vi, acc_re[j]);
        acc_im[j] = _mm256_fmadd_pd(s_re, vi, acc_im[j]);
        acc_im[j] = _mm256_fmadd_pd(s_im, vr, acc_im[j]);
      }
    }
    double re[2] = {hsum(acc_re[0]), hsum(acc_re[1])};
    double im[2] = {hsum(acc_im[0]), hsum(acc_im[1])};
    for (; p < end; ++p) {
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
        re[j] += s_re * vr - s_im * vi;
        im[j] += s_re * vi + s_im * vr;
      }
    }
    for (int j = 0; j < d; ++j) {
      out[2 * (l * d + j)] = -im[j];
      out[2 * (l * d + j) + 1] = re[j];
    }
  }
}

}  // namespace

const KernelTable& avx2_table_impl() {
  static const KernelTable table{"avx2", weighted_sumsq, weighted_dot, scale, damped_update, convolve};
  return table;
}

}  // namespace sgb::kernels
