#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace weylmod::detail {

namespace {

struct PlanCache {
    std::mutex mu;
    std::map<std::pair<std::vector<int>, int>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }

    fftw_plan get(const std::vector<int>& shape, int sign) {
        std::lock_guard lock(mu);
        auto key = std::make_pair(shape, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        std::size_t total = 1;
        for (int s : shape) total *= static_cast<std::size_t>(s);
        auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
        fftw_plan plan = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), buf, buf,
                                       sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        plans.emplace(key, plan);
        return plan;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void fft_inplace(cplx* data, const std::vector<int>& shape, int sign) {
    fftw_plan plan = cache().get(shape, sign);
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, p, p);
}

}  // namespace weylmod::detail
