#include "sbfd/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace sbfd {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    PlanPair get(std::size_t n) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;

        std::vector<std::complex<double>> a(n), b(n);
        auto* in = reinterpret_cast<fftw_complex*>(a.data());
        auto* out = reinterpret_cast<fftw_complex*>(b.data());
        PlanPair p;
        // FFTW_UNALIGNED lets the cached plan execute on any caller buffer;
        // FFTW_ESTIMATE keeps planning deterministic run to run.
        p.fwd = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.inv = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p.fwd || !p.inv) throw std::runtime_error("fftw planning failed");
        plans_[n] = p;
        return p;
    }

  private:
    PlanCache() = default;
    std::mutex mu_;
    std::map<std::size_t, PlanPair> plans_;
};

} // namespace

void fft_warm(std::size_t n) { PlanCache::instance().get(n); }

void fft_forward(std::size_t n, const std::complex<double>* in, std::complex<double>* out) {
    if (n == 0) throw std::invalid_argument("fft_forward: empty transform");
    auto p = PlanCache::instance().get(n);
    fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void fft_inverse(std::size_t n, const std::complex<double>* in, std::complex<double>* out) {
    if (n == 0) throw std::invalid_argument("fft_inverse: empty transform");
    auto p = PlanCache::instance().get(n);
    fftw_execute_dft(p.inv, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

} // namespace sbfd
