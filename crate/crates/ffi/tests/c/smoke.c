#include <stdio.h>
#include "pathtrace.h"

int main(void) {
    PtGraph *c4 = NULL, *ghat = NULL, *pred = NULL;
    PtTraceSet *ts = NULL;
    size_t missed = 0, fa = 0;
    bool in_regime = false;

    if (pt_graph_named(PT_FAMILY_CYCLE, 4, &c4) != PT_STATUS_OK) return 1;
    if (pt_trace_set_from_graph(c4, 3, &ts) != PT_STATUS_OK) return 2;
    if (pt_reconstruct(ts, 4, 0, &ghat) != PT_STATUS_OK) return 3;
    if (pt_theorem_oracle(c4, &pred, &in_regime) != PT_STATUS_OK) return 4;
    if (pt_edge_diff(c4, ghat, &missed, &fa) != PT_STATUS_OK) return 5;
    printf("traces=%zu edges=%zu missed=%zu false_alarms=%zu\n",
           pt_trace_set_len(ts), pt_graph_edge_count(ghat), missed, fa);
    if (pt_graph_named(PT_FAMILY_CYCLE, 2, &pred) != PT_STATUS_OUT_OF_RANGE) return 6;
    printf("error=%s\n", pt_last_error());

    pt_graph_free(c4);
    pt_graph_free(ghat);
    pt_graph_free(pred);
    pt_trace_set_free(ts);
    return 0;
}
