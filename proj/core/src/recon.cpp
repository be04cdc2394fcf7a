#include "adaptct/recon.hpp"

#include <algorithm>
#include <cmath>

#include "adaptct/errors.hpp"

namespace adaptct {

namespace {

constexpr double kDiagWeight = 0.7071067811865476; // 1/sqrt(2)

inline double huber(double u, double delta) {
    const double a = std::fabs(u);
    return a <= delta ? 0.5 * u * u : delta * a - 0.5 * delta * delta;
}

inline double huber_deriv(double u, double delta) {
    return std::clamp(u, -delta, delta);
}

struct PairOffset {
    int dx, dy;
    double b;
};
constexpr PairOffset kPairs[4] = {{1, 0, 1.0}, {0, 1, 1.0}, {1, 1, kDiagWeight}, {1, -1, kDiagWeight}};

// Huber prior over the in-slice 8-neighborhood; each unordered pair counted once.
double prior_value(const double* x, int nz, int nx, int ny, double delta) {
    const std::size_t npix = static_cast<std::size_t>(nx) * ny;
    std::vector<double> partial(nz, 0.0);
#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < nz; ++iz) {
        const double* s = x + iz * npix;
        double acc = 0.0;
        for (const PairOffset& o : kPairs) {
            const int x_lo = std::max(0, -o.dx), x_hi = nx - std::max(0, o.dx);
            const int y_lo = std::max(0, -o.dy), y_hi = ny - std::max(0, o.dy);
            for (int ix = x_lo; ix < x_hi; ++ix)
                for (int iy = y_lo; iy < y_hi; ++iy)
                    acc += o.b * huber(s[ix * ny + iy] - s[(ix + o.dx) * ny + iy + o.dy], delta);
        }
        partial[iz] = acc;
    }
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

void prior_gradient_add(const double* x, int nz, int nx, int ny, double delta, double beta,
                        double* g) {
    const std::size_t npix = static_cast<std::size_t>(nx) * ny;
#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < nz; ++iz) {
        const double* s = x + iz * npix;
        double* gs = g + iz * npix;
        for (const PairOffset& o : kPairs) {
            const int x_lo = std::max(0, -o.dx), x_hi = nx - std::max(0, o.dx);
            const int y_lo = std::max(0, -o.dy), y_hi = ny - std::max(0, o.dy);
            for (int ix = x_lo; ix < x_hi; ++ix)
                for (int iy = y_lo; iy < y_hi; ++iy) {
                    const double d =
                        beta * o.b * huber_deriv(s[ix * ny + iy] - s[(ix + o.dx) * ny + iy + o.dy], delta);
                    gs[ix * ny + iy] += d;
                    gs[(ix + o.dx) * ny + iy + o.dy] -= d;
                }
        }
    }
}

// Sum of neighbor weights per pixel (prior curvature pattern, same for every slice).
std::vector<double> neighbor_weight_sums(int nx, int ny) {
    std::vector<double> out(static_cast<std::size_t>(nx) * ny, 0.0);
    for (const PairOffset& o : kPairs) {
        const int x_lo = std::max(0, -o.dx), x_hi = nx - std::max(0, o.dx);
        const int y_lo = std::max(0, -o.dy), y_hi = ny - std::max(0, o.dy);
        for (int ix = x_lo; ix < x_hi; ++ix)
            for (int iy = y_lo; iy < y_hi; ++iy) {
                out[ix * ny + iy] += o.b;
                out[(ix + o.dx) * ny + iy + o.dy] += o.b;
            }
    }
    return out;
}

} // namespace

Volume reconstruct(const std::vector<WeightedProjection>& data,
                   const ProjectionGeometry& geom,
                   int nz, int nx, int ny,
                   const Volume* init,
                   const ReconParams& params,
                   ReconReport* report) {
    if (data.empty()) throw InvalidInputError("reconstruct: no projection data");
    if (nz <= 0 || nx <= 0 || ny <= 0) throw GeometryError("reconstruct: bad volume dims");
    for (const WeightedProjection& d : data)
        if (d.nc != geom.num_channels || d.nz != nz)
            throw GeometryError("reconstruct: projection dims do not match geometry/volume");
    if (init && !(init->nz() == nz && init->nx() == nx && init->ny() == ny))
        throw GeometryError("reconstruct: init volume dims mismatch");
    if (!(params.delta > 0.0) || !(params.tolerance > 0.0) || params.max_iterations < 1)
        throw InvalidInputError("reconstruct: invalid solver parameters");

    const int na = static_cast<int>(data.size());
    const int nc = geom.num_channels;
    const std::size_t npix = static_cast<std::size_t>(nx) * ny;
    const std::size_t nvox = npix * nz;
    const std::size_t row_len = static_cast<std::size_t>(nc);
    const std::size_t nrows = static_cast<std::size_t>(na) * nz;

    // per-angle footprint tables, shared by every slice
    std::vector<SliceProjector> projs;
    projs.reserve(na);
    for (const WeightedProjection& d : data)
        projs.emplace_back(d.angle_deg, geom, nx, ny);

    // copy measurements to double
    std::vector<double> P(nrows * row_len), W(nrows * row_len);
    for (int a = 0; a < na; ++a)
        for (int iz = 0; iz < nz; ++iz)
            for (int ic = 0; ic < nc; ++ic) {
                const std::size_t row = (static_cast<std::size_t>(a) * nz + iz) * row_len + ic;
                P[row] = data[a].p_at(iz, ic);
                W[row] = data[a].w_at(iz, ic);
            }

    auto forward_residual = [&](const double* x, double* r) {
#pragma omp parallel for schedule(static) collapse(2)
        for (int a = 0; a < na; ++a)
            for (int iz = 0; iz < nz; ++iz) {
                const std::size_t row = (static_cast<std::size_t>(a) * nz + iz) * row_len;
                for (int ic = 0; ic < nc; ++ic) r[row + ic] = -P[row + ic];
                projs[a].apply_forward(x + iz * npix, r + row);
            }
    };

    auto data_objective = [&](const double* r) {
        std::vector<double> partial(nrows, 0.0);
#pragma omp parallel for schedule(static)
        for (std::size_t row = 0; row < nrows; ++row) {
            double acc = 0.0;
            for (std::size_t ic = 0; ic < row_len; ++ic) {
                const double v = r[row * row_len + ic];
                acc += W[row * row_len + ic] * v * v;
            }
            partial[row] = acc;
        }
        double total = 0.0;
        for (double v : partial) total += v;
        return 0.5 * total;
    };

    // gradient of the data term: sum_a A^T (w .* r)
    auto data_gradient = [&](const double* r, double* g) {
        std::fill(g, g + nvox, 0.0);
#pragma omp parallel for schedule(static)
        for (int iz = 0; iz < nz; ++iz) {
            std::vector<double> wr(row_len);
            for (int a = 0; a < na; ++a) {
                const std::size_t row = (static_cast<std::size_t>(a) * nz + iz) * row_len;
                for (std::size_t ic = 0; ic < row_len; ++ic)
                    wr[ic] = W[row + ic] * r[row + ic];
                projs[a].apply_adjoint(wr.data(), g + iz * npix);
            }
        }
    };

    // diagonal majorizer of the data term: A^T diag(w) A 1
    std::vector<double> diag(nvox, 0.0);
    {
        std::vector<std::vector<double>> colsum(na, std::vector<double>(row_len, 0.0));
        for (int a = 0; a < na; ++a) projs[a].ones_forward(colsum[a].data());
#pragma omp parallel for schedule(static)
        for (int iz = 0; iz < nz; ++iz) {
            std::vector<double> wc(row_len);
            for (int a = 0; a < na; ++a) {
                const std::size_t row = (static_cast<std::size_t>(a) * nz + iz) * row_len;
                for (std::size_t ic = 0; ic < row_len; ++ic)
                    wc[ic] = W[row + ic] * colsum[a][ic];
                projs[a].apply_adjoint(wc.data(), diag.data() + iz * npix);
            }
        }
    }

    // resolve the prior strength
    double beta = params.beta;
    if (beta < 0.0) {
        // heuristic initial estimate: back-projection over ray density
        std::vector<double> num(nvox, 0.0), den(nvox, 0.0);
#pragma omp parallel for schedule(static)
        for (int iz = 0; iz < nz; ++iz) {
            std::vector<double> ones_row(row_len);
            for (int a = 0; a < na; ++a) {
                const std::size_t row = (static_cast<std::size_t>(a) * nz + iz) * row_len;
                projs[a].apply_adjoint(P.data() + row, num.data() + iz * npix);
                std::fill(ones_row.begin(), ones_row.end(), 0.0);
                projs[a].ones_forward(ones_row.data());
                projs[a].apply_adjoint(ones_row.data(), den.data() + iz * npix);
            }
        }
        std::vector<double> xh(nvox, 0.0);
        for (std::size_t i = 0; i < nvox; ++i)
            xh[i] = den[i] > 1e-12 ? std::max(0.0, num[i] / den[i]) : 0.0;
        std::vector<double> rh(nrows * row_len);
        forward_residual(xh.data(), rh.data());
        const double data_mag = data_objective(rh.data());
        const double prior_mag = prior_value(xh.data(), nz, nx, ny, params.delta);
        beta = prior_mag > 0.0 ? params.beta_auto_scale * data_mag / prior_mag : 0.0;
    }
    if (report) report->beta_used = beta;

    const std::vector<double> curv = neighbor_weight_sums(nx, ny);
    for (int iz = 0; iz < nz; ++iz)
        for (std::size_t j = 0; j < npix; ++j)
            diag[iz * npix + j] += 2.0 * beta * curv[j];

    auto objective = [&](const double* x, const double* r) {
        return data_objective(r) + beta * prior_value(x, nz, nx, ny, params.delta);
    };

    // state
    std::vector<double> x(nvox, 0.0);
    if (init)
        for (std::size_t i = 0; i < nvox; ++i) x[i] = init->data()[i];
    std::vector<double> x_prev(x);
    std::vector<double> r(nrows * row_len), r_prev, r_new(nrows * row_len);
    forward_residual(x.data(), r.data());
    r_prev = r;
    double obj = objective(x.data(), r.data());

    if (report) {
        *report = ReconReport{};
        report->beta_used = beta;
        report->objective.push_back(obj);
    }

    std::vector<double> z(nvox), g(nvox), x_new(nvox), rz(nrows * row_len);
    double t_momentum = 1.0;
    int iterations = 0;
    double rel_update = 0.0;

    for (int it = 1; it <= params.max_iterations; ++it) {
        iterations = it;
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
        const double omega = (t_momentum - 1.0) / t_next;

        auto take_step = [&](const double* base, const double* base_r) {
            data_gradient(base_r, g.data());
            prior_gradient_add(base, nz, nx, ny, params.delta, beta, g.data());
#pragma omp parallel for schedule(static)
            for (std::size_t i = 0; i < nvox; ++i) {
                double v = base[i];
                if (diag[i] > 0.0) v -= g[i] / diag[i];
                if (params.nonnegativity && v < 0.0) v = 0.0;
                x_new[i] = v;
            }
            forward_residual(x_new.data(), r_new.data());
            return objective(x_new.data(), r_new.data());
        };

        double new_obj;
        bool used_momentum = omega > 0.0;
        if (used_momentum) {
            for (std::size_t i = 0; i < nvox; ++i) z[i] = x[i] + omega * (x[i] - x_prev[i]);
            for (std::size_t i = 0; i < rz.size(); ++i) rz[i] = r[i] + omega * (r[i] - r_prev[i]);
            new_obj = take_step(z.data(), rz.data());
            if (new_obj > obj) {
                // momentum overshot; fall back to the plain majorized step
                new_obj = take_step(x.data(), r.data());
                t_momentum = 1.0;
                used_momentum = false;
                if (report) ++report->momentum_rejects;
            }
        } else {
            new_obj = take_step(x.data(), r.data());
        }

        double diff2 = 0.0, base2 = 0.0;
        for (std::size_t i = 0; i < nvox; ++i) {
            const double d = x_new[i] - x[i];
            diff2 += d * d;
            base2 += x[i] * x[i];
        }
        rel_update = std::sqrt(diff2) / std::max(std::sqrt(base2), 1e-30);

        x_prev.swap(x);
        x.swap(x_new);
        r_prev.swap(r);
        r.swap(r_new);
        obj = new_obj;
        if (used_momentum) t_momentum = t_next;

        if (report) report->objective.push_back(obj);
        if (rel_update < params.tolerance) break;
    }

    if (report) {
        report->iterations = iterations;
        report->final_relative_update = rel_update;
    }

    Volume out(nz, nx, ny);
    for (std::size_t i = 0; i < nvox; ++i) out.data()[i] = static_cast<float>(x[i]);
    return out;
}

} // namespace adaptct
