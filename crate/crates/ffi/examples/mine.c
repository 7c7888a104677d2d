/* cc -Icrates/ffi/include crates/ffi/examples/mine.c target/release/libplatoon_ffi.a -lpthread -ldl -lm -o mine */
#include <stdio.h>

#include "platoon.h"

int main(int argc, char **argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: %s FILE.paths\n", argv[0]);
        return 1;
    }
    PlatoonDataset *ds = NULL;
    if (platoon_dataset_load(argv[1], &ds) != PLATOON_STATUS_OK) {
        fprintf(stderr, "load: %s\n", platoon_last_error());
        return 2;
    }
    PlatoonParams params = {.m = 2, .k = 3, .d = 1, .eps = 6};
    PlatoonResult *res = NULL;
    PlatoonStatus st = platoon_mine(ds, &params, PLATOON_ALGORITHM_MAXGROWTH, &res);
    if (st != PLATOON_STATUS_OK) {
        fprintf(stderr, "mine: %s\n", platoon_last_error());
        platoon_dataset_free(ds);
        return 2;
    }
    printf("%zu patterns\n%s", platoon_result_len(res), platoon_result_jsonl(res));
    platoon_result_free(res);
    platoon_dataset_free(ds);
    return 0;
}
