#include "crsegre/rng.hpp"

namespace crsegre {

// splitmix64: tiny, fully specified, platform-independent
std::uint64_t Rng::next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

long Rng::in_range(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
}

GRat Rng::small_grat(long height) {
    long rn = in_range(-height, height);
    long rd = in_range(1, height);
    long in = in_range(-height, height);
    long id = in_range(1, height);
    return GRat(mpq_class(rn, static_cast<unsigned long>(rd)),
                mpq_class(in, static_cast<unsigned long>(id)));
}

GRat Rng::small_grat_nonzero(long height) {
    for (;;) {
        GRat q = small_grat(height);
        if (!q.is_zero()) return q;
    }
}

}  // namespace crsegre
