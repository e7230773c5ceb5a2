#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "qgal/algebra.hpp"

namespace qgal {

// Owns descriptors so that elements built over them stay valid for the
// lifetime of a model or suite run. Tensor descriptors are memoized.
class DescriptorPool {
public:
    template <class T, class... Args>
    const T* make(Args&&... args) {
        auto p = std::make_unique<T>(std::forward<Args>(args)...);
        const T* raw = p.get();
        owned_.push_back(std::move(p));
        return raw;
    }

    const TensorDescriptor* tensor(const Descriptor* a, const Descriptor* b) {
        auto key = std::make_pair(a, b);
        auto it = tensors_.find(key);
        if (it != tensors_.end()) return it->second;
        const TensorDescriptor* t = make<TensorDescriptor>(a, b);
        tensors_.emplace(key, t);
        return t;
    }

    // a (x) a, a (x) a (x) a
    const TensorDescriptor* tensor2(const Descriptor* a) { return tensor(a, a); }
    const TensorDescriptor* tensor3(const Descriptor* a) { return tensor(tensor(a, a), a); }

private:
    std::vector<std::unique_ptr<Descriptor>> owned_;
    std::map<std::pair<const Descriptor*, const Descriptor*>, const TensorDescriptor*> tensors_;
};

} // namespace qgal
