#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <string>

namespace qgal {

// Basis label of a concrete *-algebra: a short tuple of integers.
// A group element is (g); a matrix unit is (i,j); a matrix unit tensored
// with a shift power is (i,j,k); tensor-product labels concatenate.
class Label {
public:
    static constexpr int kCapacity = 15;

    Label() : size_(0) { v_.fill(0); }

    Label(std::initializer_list<int32_t> xs) : size_(0) {
        v_.fill(0);
        for (int32_t x : xs) push_back(x);
    }

    int size() const { return size_; }

    int32_t operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
    int32_t& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }

    void push_back(int32_t x) { v_[static_cast<std::size_t>(size_++)] = x; }

    // Concatenation, used for tensor-product labels.
    friend Label operator+(const Label& a, const Label& b) {
        Label r = a;
        for (int i = 0; i < b.size(); ++i) r.push_back(b[i]);
        return r;
    }

    Label slice(int from, int count) const {
        Label r;
        for (int i = 0; i < count; ++i) r.push_back(v_[static_cast<std::size_t>(from + i)]);
        return r;
    }

    friend bool operator==(const Label& a, const Label& b) {
        if (a.size_ != b.size_) return false;
        for (int i = 0; i < a.size_; ++i)
            if (a.v_[static_cast<std::size_t>(i)] != b.v_[static_cast<std::size_t>(i)]) return false;
        return true;
    }
    friend bool operator!=(const Label& a, const Label& b) { return !(a == b); }

    friend bool operator<(const Label& a, const Label& b) {
        if (a.size_ != b.size_) return a.size_ < b.size_;
        for (int i = 0; i < a.size_; ++i)
            if (a.v_[static_cast<std::size_t>(i)] != b.v_[static_cast<std::size_t>(i)])
                return a.v_[static_cast<std::size_t>(i)] < b.v_[static_cast<std::size_t>(i)];
        return false;
    }

    std::size_t hash() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t x) {
            h ^= x;
            h *= 1099511628211ull;
        };
        mix(static_cast<std::uint64_t>(size_));
        for (int i = 0; i < size_; ++i)
            mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(v_[static_cast<std::size_t>(i)])));
        return static_cast<std::size_t>(h);
    }

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < size_; ++i) {
            if (i) s += ",";
            s += std::to_string(v_[static_cast<std::size_t>(i)]);
        }
        s += ")";
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Label& l) { return os << l.str(); }

private:
    std::array<int32_t, kCapacity> v_;
    int size_;
};

struct LabelHash {
    std::size_t operator()(const Label& l) const { return l.hash(); }
};

} // namespace qgal
