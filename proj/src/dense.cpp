#include "inr/dense.hpp"

#include <cmath>

#if defined(__AVX512F__)
#include <immintrin.h>
#elif defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif

namespace inr {

namespace {

static_assert(kPixelBlock == 8, "kernels operate on eight-lane vectors");

// Eight doubles. fma() is exactly rounded on every path, so the vector and
// scalar builds produce identical results.
#if defined(__AVX512F__)
struct V8 {
  __m512d v;
  static V8 zero() { return {_mm512_setzero_pd()}; }
  static V8 load(const double* p) { return {_mm512_loadu_pd(p)}; }
  static V8 broadcast(double x) { return {_mm512_set1_pd(x)}; }
  void store(double* p) const { _mm512_storeu_pd(p, v); }
  friend V8 fma(V8 a, V8 b, V8 c) { return {_mm512_fmadd_pd(a.v, b.v, c.v)}; }
  friend V8 operator+(V8 a, V8 b) { return {_mm512_add_pd(a.v, b.v)}; }
};
#elif defined(__AVX2__) && defined(__FMA__)
struct V8 {
  __m256d lo, hi;
  static V8 zero() { return {_mm256_setzero_pd(), _mm256_setzero_pd()}; }
  static V8 load(const double* p) { return {_mm256_loadu_pd(p), _mm256_loadu_pd(p + 4)}; }
  static V8 broadcast(double x) { return {_mm256_set1_pd(x), _mm256_set1_pd(x)}; }
  void store(double* p) const {
    _mm256_storeu_pd(p, lo);
    _mm256_storeu_pd(p + 4, hi);
  }
  friend V8 fma(V8 a, V8 b, V8 c) { return {_mm256_fmadd_pd(a.lo, b.lo, c.lo), _mm256_fmadd_pd(a.hi, b.hi, c.hi)}; }
  friend V8 operator+(V8 a, V8 b) { return {_mm256_add_pd(a.lo, b.lo), _mm256_add_pd(a.hi, b.hi)}; }
};
#else
struct V8 {
  double v[8];
  static V8 zero() { return {}; }
  static V8 load(const double* p) {
    V8 r;
    for (int i = 0; i < 8; ++i) r.v[i] = p[i];
    return r;
  }
  static V8 broadcast(double x) {
    V8 r;
    for (double& d : r.v) d = x;
    return r;
  }
  void store(double* p) const {
    for (int i = 0; i < 8; ++i) p[i] = v[i];
  }
  friend V8 fma(V8 a, V8 b, V8 c) {
    for (int i = 0; i < 8; ++i) c.v[i] = std::fma(a.v[i], b.v[i], c.v[i]);
    return c;
  }
  friend V8 operator+(V8 a, V8 b) {
    for (int i = 0; i < 8; ++i) a.v[i] += b.v[i];
    return a;
  }
};
#endif

// Lanes folded pairwise in a fixed order.
double fold(V8 x) {
  double l[8];
  x.store(l);
  return ((l[0] + l[1]) + (l[2] + l[3])) + ((l[4] + l[5]) + (l[6] + l[7]));
}

// R output rows x P pixel vectors.
template <int R, int P>
inline void nn_tile(const double* a, Index k, const double* b, Index n, Index p0, double* c) {
  V8 acc[R][P];
  for (int r = 0; r < R; ++r) {
    for (int q = 0; q < P; ++q) acc[r][q] = V8::zero();
  }
  for (Index kk = 0; kk < k; ++kk) {
    const double* brow = b + kk * n + p0;
    V8 bv[P];
    for (int q = 0; q < P; ++q) bv[q] = V8::load(brow + 8 * q);
    for (int r = 0; r < R; ++r) {
      const V8 w = V8::broadcast(a[r * k + kk]);
      for (int q = 0; q < P; ++q) acc[r][q] = fma(w, bv[q], acc[r][q]);
    }
  }
  for (int r = 0; r < R; ++r) {
    for (int q = 0; q < P; ++q) acc[r][q].store(c + r * n + p0 + 8 * q);
  }
}

template <int P>
void nn_columns(const double* a, Index m, Index k, const double* b, Index n, Index p0, double* c) {
  Index r0 = 0;
  for (; r0 + 4 <= m; r0 += 4) nn_tile<4, P>(a + r0 * k, k, b, n, p0, c + r0 * n);
  switch (m - r0) {
    case 3: nn_tile<3, P>(a + r0 * k, k, b, n, p0, c + r0 * n); break;
    case 2: nn_tile<2, P>(a + r0 * k, k, b, n, p0, c + r0 * n); break;
    case 1: nn_tile<1, P>(a + r0 * k, k, b, n, p0, c + r0 * n); break;
    default: break;
  }
}

template <int R, int K>
inline void nt_tile(const double* a, Index n, const double* b, double* c, Index ldc) {
  V8 acc[R][K];
  for (int r = 0; r < R; ++r) {
    for (int q = 0; q < K; ++q) acc[r][q] = V8::zero();
  }
  for (Index p0 = 0; p0 < n; p0 += 8) {
    V8 bv[K];
    for (int q = 0; q < K; ++q) bv[q] = V8::load(b + q * n + p0);
    for (int r = 0; r < R; ++r) {
      const V8 av = V8::load(a + r * n + p0);
      for (int q = 0; q < K; ++q) acc[r][q] = fma(av, bv[q], acc[r][q]);
    }
  }
  for (int r = 0; r < R; ++r) {
    for (int q = 0; q < K; ++q) c[r * ldc + q] = fold(acc[r][q]);
  }
}

template <int R>
void nt_rows(const double* a, Index n, const double* b, Index k, double* c) {
  Index q0 = 0;
  for (; q0 + 4 <= k; q0 += 4) nt_tile<R, 4>(a, n, b + q0 * n, c + q0, k);
  for (; q0 < k; ++q0) nt_tile<R, 1>(a, n, b + q0 * n, c + q0, k);
}

}  // namespace

void gemm_nn(const double* a, Index m, Index k, const double* b, Index n, double* c) {
  // Column panels of b stay cache-resident while every row block uses them.
  Index p0 = 0;
  for (; p0 + 32 <= n; p0 += 32) nn_columns<4>(a, m, k, b, n, p0, c);
  for (; p0 < n; p0 += 8) nn_columns<1>(a, m, k, b, n, p0, c);
}

void gemm_nt(const double* a, Index m, Index n, const double* b, Index k, double* c) {
  Index r0 = 0;
  for (; r0 + 4 <= m; r0 += 4) nt_rows<4>(a + r0 * n, n, b, k, c + r0 * k);
  for (; r0 < m; ++r0) nt_rows<1>(a + r0 * n, n, b, k, c + r0 * k);
}

void row_sums(const double* a, Index m, Index n, double* out) {
  const V8 one = V8::broadcast(1.0);
  for (Index r = 0; r < m; ++r) {
    V8 acc = V8::zero();
    for (Index p0 = 0; p0 < n; p0 += 8) acc = fma(V8::load(a + r * n + p0), one, acc);
    out[r] = fold(acc);
  }
}

}  // namespace inr
