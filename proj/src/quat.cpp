#include "qk/quat.hpp"

#include <ostream>

namespace qk {

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << "(" << q.w << (q.x < 0 ? "" : "+") << q.x << "i"
              << (q.y < 0 ? "" : "+") << q.y << "j"
              << (q.z < 0 ? "" : "+") << q.z << "k)";
}

} // namespace qk
