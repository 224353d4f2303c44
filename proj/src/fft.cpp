#include "kvn/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "kvn/error.hpp"

namespace kvn::fft {
namespace {

// Plans are created unaligned so they may be executed on any array with the
// same layout, and so the chosen codelets never depend on allocation address.
struct PlanKey {
    int n, howmany, stride, dist, sign;
    auto operator<=>(const PlanKey&) const = default;
};

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(const PlanKey& key, fftw_complex* sample) {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        fftw_plan plan = fftw_plan_many_dft(1, &key.n, key.howmany, sample, nullptr, key.stride,
                                            key.dist, sample, nullptr, key.stride, key.dist,
                                            key.sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) throw Error("fft: planner failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

void run(std::span<cplx> data, int n, int howmany, int stride, int dist, Direction dir) {
    if (data.empty()) return;
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    const int sign = dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = cache().get({n, howmany, stride, dist, sign}, ptr);
    fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void transform(std::span<cplx> data, Direction dir) {
    run(data, static_cast<int>(data.size()), 1, 1, 0, dir);
}

void along_rows(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir) {
    if (data.size() != rows * cols) throw Error("fft: shape mismatch");
    run(data, static_cast<int>(rows), static_cast<int>(cols), static_cast<int>(cols), 1, dir);
}

void along_cols(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir) {
    if (data.size() != rows * cols) throw Error("fft: shape mismatch");
    run(data, static_cast<int>(cols), static_cast<int>(rows), 1, static_cast<int>(cols), dir);
}

std::vector<double> wavenumbers(std::size_t n, double spacing) {
    std::vector<double> k(n);
    const double base = 2.0 * std::numbers::pi / (static_cast<double>(n) * spacing);
    for (std::size_t m = 0; m < n; ++m) {
        const auto signed_m = m < n / 2 ? static_cast<double>(m)
                                        : static_cast<double>(m) - static_cast<double>(n);
        k[m] = base * signed_m;
    }
    return k;
}

}  // namespace kvn::fft
