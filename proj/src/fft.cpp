#include "displab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace displab {

namespace {

std::mutex plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> plan_cache;

fftw_plan get_plan(int d, int n, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_tuple(d, n, sign);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;

    // Plan on a scratch buffer with FFTW_UNALIGNED so the plan can be
    // re-executed on any caller-owned array via fftw_execute_dft.
    size_t total = (d == 1) ? size_t(n) : size_t(n) * n;
    fftw_complex* scratch = fftw_alloc_complex(total);
    fftw_plan plan;
    if (d == 1) {
        plan = fftw_plan_dft_1d(n, scratch, scratch, sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    } else {
        plan = fftw_plan_dft_2d(n, n, scratch, scratch, sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    fftw_free(scratch);
    if (!plan) throw std::runtime_error("fftw plan creation failed");
    plan_cache[key] = plan;
    return plan;
}

void execute(int d, int n, int sign, std::vector<cplx>& data) {
    size_t total = (d == 1) ? size_t(n) : size_t(n) * n;
    if (data.size() != total) throw std::invalid_argument("fft: size mismatch");
    fftw_plan plan = get_plan(d, n, sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void fft_forward(int d, int n, std::vector<cplx>& data) {
    execute(d, n, FFTW_FORWARD, data);
}

void fft_backward(int d, int n, std::vector<cplx>& data) {
    execute(d, n, FFTW_BACKWARD, data);
}

}  // namespace displab
