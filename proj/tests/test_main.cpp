#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "sclab/linalg.hpp"

int main(int argc, char** argv) {
  // Tests spawn their own worker threads in places; keep the BLAS itself on
  // one thread so runs are deterministic and the box is not oversubscribed.
  sclab::linalg::use_single_threaded_blas();
  return doctest::Context(argc, argv).run();
}
