#include "dms/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace dms::fft {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

// FFTW's planner is not thread-safe; creation is serialized. Plans are made
// with FFTW_UNALIGNED so the new-array execute calls accept any buffer.
const PlanPair& plans_for(std::size_t n) {
    static std::mutex mtx;
    static std::map<std::size_t, PlanPair> cache;
    std::scoped_lock lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<cplx> a(n), b(n);
    auto* ap = reinterpret_cast<fftw_complex*>(a.data());
    auto* bp = reinterpret_cast<fftw_complex*>(b.data());
    PlanPair p;
    p.fwd = fftw_plan_dft_1d(static_cast<int>(n), ap, bp, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_1d(static_cast<int>(n), ap, bp, FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(n, p).first->second;
}

}  // namespace

void forward(const cplx* in, cplx* out, std::size_t n) {
    const auto& p = plans_for(n);
    fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void backward(const cplx* in, cplx* out, std::size_t n) {
    const auto& p = plans_for(n);
    fftw_execute_dft(p.bwd, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace dms::fft
