#include "fft.hpp"

#include "echomark/error.hpp"

#include <map>
#include <mutex>
#include <utility>

namespace echomark::fft {

namespace {

enum class Direction { forward, inverse };

class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(Direction dir, std::size_t n)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(dir, n);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;
        auto real = alloc_real(n);
        auto cplx = alloc_complex(n / 2 + 1);
        const int size = static_cast<int>(n);
        fftw_plan plan = dir == Direction::forward
            ? fftw_plan_dft_r2c_1d(size, real.get(), cplx.get(), FFTW_ESTIMATE)
            : fftw_plan_dft_c2r_1d(size, cplx.get(), real.get(), FFTW_ESTIMATE);
        if (!plan)
            throw Error("FFTW failed to create a plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<Direction, std::size_t>, fftw_plan> plans_;
};

PlanCache& cache()
{
    static PlanCache instance;
    return instance;
}

} // namespace

RealBuffer alloc_real(std::size_t n)
{
    auto* p = fftw_alloc_real(n == 0 ? 1 : n);
    if (!p)
        throw Error("FFT buffer allocation failed");
    return RealBuffer(p);
}

ComplexBuffer alloc_complex(std::size_t n)
{
    auto* p = fftw_alloc_complex(n == 0 ? 1 : n);
    if (!p)
        throw Error("FFT buffer allocation failed");
    return ComplexBuffer(p);
}

void forward(std::size_t n, double* in, fftw_complex* out)
{
    fftw_execute_dft_r2c(cache().get(Direction::forward, n), in, out);
}

void inverse(std::size_t n, fftw_complex* in, double* out)
{
    fftw_execute_dft_c2r(cache().get(Direction::inverse, n), in, out);
}

std::size_t good_size(std::size_t n)
{
    for (std::size_t m = n < 1 ? 1 : n;; ++m) {
        std::size_t r = m;
        for (std::size_t p : {2u, 3u, 5u, 7u})
            while (r % p == 0)
                r /= p;
        if (r == 1)
            return m;
    }
}

} // namespace echomark::fft
