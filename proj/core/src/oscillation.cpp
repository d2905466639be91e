#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include <fftw3.h>

#include "spinkin/transport.hpp"

namespace spinkin {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<double> magnitude_spectrum(const std::vector<double>& x, std::size_t npad) {
    double* in = fftw_alloc_real(npad);
    fftw_complex* out = fftw_alloc_complex(npad / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(npad), in, out, FFTW_ESTIMATE);
    }
    std::fill(in, in + npad, 0.0);
    std::copy(x.begin(), x.end(), in);
    fftw_execute(plan);
    std::vector<double> mag(npad / 2 + 1);
    for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::hypot(out[k][0], out[k][1]);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return mag;
}

Complex component_at(const std::vector<double>& x, double dt, double f) {
    Complex sum = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n)
        sum += x[n] * std::polar(1.0, -2.0 * constants::pi * f * (n * dt));
    return sum;
}

struct Extremum {
    double t;
    double value;
    bool maximum;
};

std::vector<Extremum> find_extrema(const std::vector<double>& x, double t0, double dt) {
    std::vector<Extremum> out;
    for (std::size_t n = 1; n + 1 < x.size(); ++n) {
        const double a = x[n - 1], b = x[n], c = x[n + 1];
        const bool is_max = b > a && b >= c;
        const bool is_min = b < a && b <= c;
        if (!is_max && !is_min) continue;
        const double den = a - 2.0 * b + c;
        const double delta = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
        out.push_back({t0 + (n + delta) * dt, b - 0.25 * (a - c) * delta, is_max});
    }
    return out;
}

}  // namespace

OscillationResult oscillation_analysis(const std::vector<double>& times, const std::vector<double>& p00,
                                       const std::vector<double>& ppm) {
    const std::size_t n = times.size();
    if (n < 8 || p00.size() != n || ppm.size() != n)
        throw std::invalid_argument("oscillation_analysis: need at least 8 matching samples");
    const double t0 = times.front();
    const double dt = (times.back() - t0) / (n - 1);
    if (!(dt > 0.0)) throw std::invalid_argument("oscillation_analysis: times must increase");
    for (std::size_t k = 1; k < n; ++k)
        if (std::abs(times[k] - times[k - 1] - dt) > 1e-6 * dt)
            throw std::invalid_argument("oscillation_analysis: samples must be uniform in time");

    auto centred = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= v.size();
        std::vector<double> out(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k] - mean;
        return std::make_pair(out, mean);
    };
    const auto [lo, hi] = std::minmax_element(p00.begin(), p00.end());
    if (!(*hi > *lo)) throw NoOscillation();
    const auto [x, mean00] = centred(p00);
    const auto [y, meanpm] = centred(ppm);
    (void)meanpm;

    std::size_t npad = 1;
    while (npad < 8 * n) npad <<= 1;
    const std::vector<double> mag = magnitude_spectrum(x, npad);

    std::size_t peak = 1;
    for (std::size_t k = 1; k + 1 < mag.size(); ++k)
        if (mag[k] > mag[peak]) peak = k;
    std::vector<double> rest(mag.begin() + 1, mag.end());
    std::nth_element(rest.begin(), rest.begin() + rest.size() / 2, rest.end());
    const double median = rest[rest.size() / 2];

    OscillationResult out;
    out.peak_to_median = median > 0.0 ? mag[peak] / median : (mag[peak] > 0.0 ? INFINITY : 0.0);
    if (!(mag[peak] > 0.0) || !(out.peak_to_median > 5.0)) throw NoOscillation();

    const double a = mag[peak - 1], b = mag[peak], c = mag[peak + 1];
    const double den = a - 2.0 * b + c;
    const double delta = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
    const double fs = 1.0 / dt;
    out.frequency = (peak + delta) * fs / npad;

    const double duration = times.back() - t0;
    if (out.frequency * duration < 10.0 || fs / out.frequency < 20.0)
        throw std::invalid_argument("oscillation_analysis: need >= 10 periods at >= 20 samples per period (got " +
                                    std::to_string(out.frequency * duration) + " periods, " +
                                    std::to_string(fs / out.frequency) + " samples per period)");

    const Complex cx = component_at(x, dt, out.frequency);
    const Complex cy = component_at(y, dt, out.frequency);
    double phase = std::arg(cy) - std::arg(cx);
    phase = std::fmod(phase, 2.0 * constants::pi);
    if (phase < 0.0) phase += 2.0 * constants::pi;
    out.phase_difference = phase;

    const std::vector<Extremum> ext = find_extrema(x, t0, dt);
    std::vector<double> ts, logs;
    for (std::size_t k = 0; k + 1 < ext.size(); ++k) {
        if (ext[k].maximum == ext[k + 1].maximum) continue;
        const double amp = 0.5 * std::abs(ext[k].value - ext[k + 1].value);
        if (!(amp > 0.0)) continue;
        ts.push_back(0.5 * (ext[k].t + ext[k + 1].t));
        logs.push_back(std::log(amp));
    }
    if (ts.size() >= 2) {
        double mt = 0.0, ml = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) { mt += ts[k]; ml += logs[k]; }
        mt /= ts.size();
        ml /= ts.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            sxy += (ts[k] - mt) * (logs[k] - ml);
            sxx += (ts[k] - mt) * (ts[k] - mt);
        }
        out.decay_rate = sxx > 0.0 ? -sxy / sxx : 0.0;
    }
    for (const auto& e : ext) {
        if (!e.maximum) continue;
        out.maxima_times.push_back(e.t);
        out.maxima_values.push_back(e.value + mean00);
    }
    return out;
}

OscillationResult oscillation_analysis(const Trajectory& trajectory) {
    std::vector<double> p00, ppm;
    p00.reserve(trajectory.observables.size());
    ppm.reserve(trajectory.observables.size());
    for (const auto& o : trajectory.observables) {
        p00.push_back(o.p00);
        ppm.push_back(o.ppm);
    }
    return oscillation_analysis(trajectory.times, p00, ppm);
}

}  // namespace spinkin
