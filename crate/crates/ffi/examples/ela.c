/* cc -Icrates/ffi/include crates/ffi/examples/ela.c target/release/libo2basis_ffi.a -lpthread -ldl -lm */
#include <stdio.h>
#include "o2basis.h"

int main(void) {
    O2bBasis *b = NULL;
    if (o2b_basis_compute("ela", O2B_GROUP_O2, O2B_MODE_COVARIANTS, &b) != O2B_STATUS_OK) {
        fprintf(stderr, "error: %s\n", o2b_last_error_message());
        return 1;
    }
    size_t n = 0;
    o2b_basis_len(b, &n);
    for (size_t i = 0; i < n; i++) {
        char *f = NULL, *t = NULL;
        uint32_t order, degree;
        o2b_generator_grading(b, i, &order, &degree);
        o2b_generator_formula(b, i, false, &f);
        o2b_generator_tensorial(b, i, false, &t);
        printf("%2zu  order %u  degree %u  %s  =  %s\n", i + 1, order, degree, f, t);
        o2b_string_free(f);
        o2b_string_free(t);
    }
    o2b_basis_free(b);
    return 0;
}
