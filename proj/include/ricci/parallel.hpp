#pragma once

#include <exception>
#include <limits>
#include <mutex>

namespace ricci {

// Keeps the exception with the lowest work-item index raised inside a parallel region,
// so the rethrown error does not depend on thread scheduling.
class ExceptionSlot {
public:
    void capture(long long index) {
        std::lock_guard<std::mutex> lock(mu_);
        if (index < index_) {
            index_ = index;
            first_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (first_) std::rethrow_exception(first_);
    }

private:
    std::mutex mu_;
    std::exception_ptr first_;
    long long index_ = std::numeric_limits<long long>::max();
};

}  // namespace ricci
