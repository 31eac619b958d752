#pragma once

#include <cstddef>

namespace swarmselect {

/// 2x2 counts with ASD (label 1) as the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }

    void add(int truth, int predicted) {
        if (truth == 1) {
            (predicted == 1 ? tp : fn) += 1;
        } else {
            (predicted == 1 ? fp : tn) += 1;
        }
    }

    /// The same predictions seen with label 0 as the positive class.
    ConfusionMatrix swapped() const { return {tn, fn, tp, fp}; }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

}  // namespace swarmselect
