#include <lllmt/workers.hh>

#include <cstdlib>
#include <string>

namespace lllmt {

auto worker_count() -> unsigned
{
    if (const char * env = std::getenv("LLLMT_THREADS")) {
        try {
            int value = std::stoi(env);
            if (value >= 1)
                return static_cast<unsigned>(value);
        }
        catch (const std::exception &) {
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}
