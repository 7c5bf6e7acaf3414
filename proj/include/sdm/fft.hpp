#pragma once
//============================================================================
// Thin FFTW3 wrapper with a process-wide plan cache.
//
// Plans are created once per grid shape with FFTW_ESTIMATE | FFTW_UNALIGNED
// (deterministic planning, valid for any caller buffers) and executed through
// the new-array interface, which is thread-safe.  Transforms are the plain
// unnormalized DFT pair:
//   forward : F_k = sum_g f_g exp(-2pi i k.g/G)
//   backward: f_g = sum_k F_k exp(+2pi i k.g/G)
//============================================================================

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace sdm {

class FftPlan {
 public:
  // shape: row-major dimensions of the complex-to-complex transform
  static const FftPlan& get(const std::vector<int>& shape) {
    static std::mutex mu;
    static std::map<std::vector<int>, std::unique_ptr<FftPlan>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(shape);
    if (it == cache.end()) it = cache.emplace(shape, std::unique_ptr<FftPlan>(new FftPlan(shape))).first;
    return *it->second;
  }

  void forward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }
  void backward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }

 private:
  explicit FftPlan(const std::vector<int>& shape) {
    std::size_t n = 1;
    for (int s : shape) n *= std::size_t(s);
    std::vector<std::complex<double>> a(n), b(n);
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft(int(shape.size()), shape.data(), reinterpret_cast<fftw_complex*>(a.data()),
                         reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft(int(shape.size()), shape.data(), reinterpret_cast<fftw_complex*>(a.data()),
                         reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD, flags);
  }

  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

}  // namespace sdm
