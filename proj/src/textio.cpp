#include "gepsvm/textio.hpp"

#include <cstdio>
#include <fstream>

#include "gepsvm/errors.hpp"

namespace gepsvm {

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os) throw IoError("cannot open for writing: " + tmp);
        os << content;
        os.flush();
        if (!os) throw IoError("failed writing: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("cannot rename " + tmp + " to " + path);
    }
}

}  // namespace gepsvm
