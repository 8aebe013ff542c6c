// AVX2+FMA variants of the image kernels. Compiled only on x86-64; the
// translation unit gets -mavx2 -mfma and is reached through runtime dispatch.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "colorseg/kernels.hpp"

namespace colorseg::kernels {

namespace {

// exp() for 4 doubles, Cephes-style rational approximation (~1 ulp).
// Arguments here are always <= 0; inputs below -700 flush toward the
// denormal range and are clamped, which only affects weights that are
// zero relative to the accumulated sums.
inline __m256d exp4(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);

    x = _mm256_max_pd(x, _mm256_set1_pd(-700.0));
    x = _mm256_min_pd(x, _mm256_set1_pd(700.0));

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    x = _mm256_fnmadd_pd(n, c1, x);
    x = _mm256_fnmadd_pd(n, c2, x);

    const __m256d xx = _mm256_mul_pd(x, x);

    __m256d px = _mm256_set1_pd(1.26177193074810590878e-4);
    px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(3.02994407707441961300e-2));
    px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(9.99999999999999999910e-1));
    px = _mm256_mul_pd(px, x);

    __m256d qx = _mm256_set1_pd(3.00198505138664455042e-6);
    qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.52448340349684104192e-3));
    qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.27265548208155028766e-1));
    qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.00000000000000000005e0));

    const __m256d ratio = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
    const __m256d e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), ratio, _mm256_set1_pd(1.0));

    // Scale by 2^n through the exponent bits; n stays within [-1010, 1010].
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

void bilateral_avx2(const BilateralArgs& a) {
    const int r = a.radius;
    const int win = 2 * r + 1;
    const __m256d inv2fr2 = _mm256_set1_pd(a.inv_two_fr2);

    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            const std::size_t c = static_cast<std::size_t>(y + r) * a.stride + (x + r);
            const double cr = a.r[c], cg = a.g[c], cb = a.b[c];
            const __m256d crv = _mm256_set1_pd(cr);
            const __m256d cgv = _mm256_set1_pd(cg);
            const __m256d cbv = _mm256_set1_pd(cb);

            __m256d wsum4 = _mm256_setzero_pd();
            __m256d sr4 = _mm256_setzero_pd();
            __m256d sg4 = _mm256_setzero_pd();
            __m256d sb4 = _mm256_setzero_pd();
            double wsum = 0.0, sr = 0.0, sg = 0.0, sb = 0.0;

            for (int dy = -r; dy <= r; ++dy) {
                const std::size_t row = c + static_cast<std::size_t>(dy) * a.stride - r;
                const double* sp = a.spatial_arg + static_cast<std::size_t>(dy + r) * win;

                int k = 0;
                for (; k + 4 <= win; k += 4) {
                    const __m256d rv = _mm256_loadu_pd(a.r + row + k);
                    const __m256d gv = _mm256_loadu_pd(a.g + row + k);
                    const __m256d bv = _mm256_loadu_pd(a.b + row + k);
                    const __m256d dr = _mm256_sub_pd(rv, crv);
                    const __m256d dg = _mm256_sub_pd(gv, cgv);
                    const __m256d db = _mm256_sub_pd(bv, cbv);
                    __m256d dist2 = _mm256_mul_pd(dr, dr);
                    dist2 = _mm256_fmadd_pd(dg, dg, dist2);
                    dist2 = _mm256_fmadd_pd(db, db, dist2);
                    const __m256d arg = _mm256_fnmadd_pd(dist2, inv2fr2, _mm256_loadu_pd(sp + k));
                    const __m256d w = exp4(arg);
                    wsum4 = _mm256_add_pd(wsum4, w);
                    sr4 = _mm256_fmadd_pd(w, rv, sr4);
                    sg4 = _mm256_fmadd_pd(w, gv, sg4);
                    sb4 = _mm256_fmadd_pd(w, bv, sb4);
                }
                for (; k < win; ++k) {
                    const std::size_t i = row + k;
                    const double dr = a.r[i] - cr;
                    const double dg = a.g[i] - cg;
                    const double db = a.b[i] - cb;
                    const double dist2 = dr * dr + dg * dg + db * db;
                    const double w = std::exp(sp[k] - dist2 * a.inv_two_fr2);
                    wsum += w;
                    sr += w * a.r[i];
                    sg += w * a.g[i];
                    sb += w * a.b[i];
                }
            }

            wsum += hsum(wsum4);
            sr += hsum(sr4);
            sg += hsum(sg4);
            sb += hsum(sb4);

            const std::size_t o = static_cast<std::size_t>(y) * a.width + x;
            a.out_r[o] = sr / wsum;
            a.out_g[o] = sg / wsum;
            a.out_b[o] = sb / wsum;
        }
    }
}

void homography_avx2(const double* h, const double* r, const double* g, const double* b,
                     std::size_t n, double* out_r, double* out_g, double* out_b) {
    const __m256d h0 = _mm256_set1_pd(h[0]), h1 = _mm256_set1_pd(h[1]), h2 = _mm256_set1_pd(h[2]),
                  h3 = _mm256_set1_pd(h[3]);
    const __m256d h4 = _mm256_set1_pd(h[4]), h5 = _mm256_set1_pd(h[5]), h6 = _mm256_set1_pd(h[6]),
                  h7 = _mm256_set1_pd(h[7]);
    const __m256d h8 = _mm256_set1_pd(h[8]), h9 = _mm256_set1_pd(h[9]), h10 = _mm256_set1_pd(h[10]),
                  h11 = _mm256_set1_pd(h[11]);
    const __m256d h12 = _mm256_set1_pd(h[12]), h13 = _mm256_set1_pd(h[13]),
                  h14 = _mm256_set1_pd(h[14]), h15 = _mm256_set1_pd(h[15]);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d rv = _mm256_loadu_pd(r + i);
        const __m256d gv = _mm256_loadu_pd(g + i);
        const __m256d bv = _mm256_loadu_pd(b + i);

        __m256d rp = _mm256_fmadd_pd(h0, rv, h3);
        rp = _mm256_fmadd_pd(h1, gv, rp);
        rp = _mm256_fmadd_pd(h2, bv, rp);
        __m256d gp = _mm256_fmadd_pd(h4, rv, h7);
        gp = _mm256_fmadd_pd(h5, gv, gp);
        gp = _mm256_fmadd_pd(h6, bv, gp);
        __m256d bp = _mm256_fmadd_pd(h8, rv, h11);
        bp = _mm256_fmadd_pd(h9, gv, bp);
        bp = _mm256_fmadd_pd(h10, bv, bp);
        __m256d w = _mm256_fmadd_pd(h12, rv, h15);
        w = _mm256_fmadd_pd(h13, gv, w);
        w = _mm256_fmadd_pd(h14, bv, w);

        _mm256_storeu_pd(out_r + i, _mm256_div_pd(rp, w));
        _mm256_storeu_pd(out_g + i, _mm256_div_pd(gp, w));
        _mm256_storeu_pd(out_b + i, _mm256_div_pd(bp, w));
    }
    for (; i < n; ++i) {
        const double rp = h[0] * r[i] + h[1] * g[i] + h[2] * b[i] + h[3];
        const double gp = h[4] * r[i] + h[5] * g[i] + h[6] * b[i] + h[7];
        const double bp = h[8] * r[i] + h[9] * g[i] + h[10] * b[i] + h[11];
        const double w = h[12] * r[i] + h[13] * g[i] + h[14] * b[i] + h[15];
        out_r[i] = rp / w;
        out_g[i] = gp / w;
        out_b[i] = bp / w;
    }
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops = {"avx2", bilateral_avx2, homography_avx2};
    return ops;
}

}  // namespace colorseg::kernels

#endif  // x86-64
