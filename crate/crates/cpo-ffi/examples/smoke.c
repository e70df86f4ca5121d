/* Minimal C consumer of the cpo ABI: parse a graph, classify it, round-trip
 * it, and read an error message.
 *
 * Build and run from the workspace root:
 *
 *   cargo build -p cpo-ffi
 *   cc -Icrates/cpo-ffi/include crates/cpo-ffi/examples/smoke.c \
 *      -Ltarget/debug -lcpo_ffi -lm -o smoke
 *   LD_LIBRARY_PATH=target/debug ./smoke
 */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include "cpo.h"

static void fail(const char *what) {
    const char *err = cpo_last_error();
    fprintf(stderr, "%s: %s\n", what, err ? err : "(no message)");
    exit(1);
}

int main(void) {
    printf("version: %s\n", cpo_version());

    bool is_sub = false;
    if (cpo_class_is_subclass_of("CognitiveRepresentation", "MentalQuality", &is_sub) != CPO_STATUS_OK)
        fail("subclass");
    printf("CognitiveRepresentation <= MentalQuality: %d\n", (int)is_sub);

    /* One believed representation: cr1 is fused with a confidence value
     * whose measurement reads 0.9, above the default threshold of 0.5. */
    const char *graph_json =
        "{\n"
        "  \"meta\": { \"format_version\": \"1\" },\n"
        "  \"nodes\": [\n"
        "    { \"id\": \"cr1\", \"classes\": [\"CognitiveRepresentation\"] },\n"
        "    { \"id\": \"cv1\", \"classes\": [\"ConfidenceValue\"] },\n"
        "    { \"id\": \"m1\", \"classes\": [\"MeasurementInformationContentEntity\"] },\n"
        "    { \"id\": \"b1\", \"classes\": [\"InformationBearingEntity\"] }\n"
        "  ],\n"
        "  \"edges\": [\n"
        "    { \"s\": \"cr1\", \"rel\": \"fused_with\", \"o\": \"cv1\", \"attrs\": {} },\n"
        "    { \"s\": \"m1\", \"rel\": \"describes\", \"o\": \"cv1\", \"attrs\": {} },\n"
        "    { \"s\": \"m1\", \"rel\": \"generically_depends_on\", \"o\": \"b1\", \"attrs\": {} }\n"
        "  ],\n"
        "  \"data\": [\n"
        "    { \"s\": \"b1\", \"rel\": \"has_decimal_value\", \"value\": \"0.9\" }\n"
        "  ]\n"
        "}\n";

    CpoGraph *graph = NULL;
    if (cpo_graph_from_json(graph_json, &graph) != CPO_STATUS_OK) fail("from_json");

    char *result = NULL;
    if (cpo_graph_classify(graph, NULL, NULL, NULL, false, &result) != CPO_STATUS_OK)
        fail("classify");
    if (strstr(result, "\"believed\"") == NULL || strstr(result, "cr1") == NULL) {
        fprintf(stderr, "expected cr1 in the believed set:\n%s", result);
        return 1;
    }
    printf("classified: cr1 believed\n");
    cpo_string_free(result);

    /* Canonical JSON is a fixed point: print, parse, print again. */
    char *canon = NULL;
    if (cpo_graph_to_json(graph, &canon) != CPO_STATUS_OK) fail("to_json");
    CpoGraph *reparsed = NULL;
    if (cpo_graph_from_json(canon, &reparsed) != CPO_STATUS_OK) fail("reparse");
    char *canon2 = NULL;
    if (cpo_graph_to_json(reparsed, &canon2) != CPO_STATUS_OK) fail("to_json 2");
    if (strcmp(canon, canon2) != 0) {
        fprintf(stderr, "round trip differs\n");
        return 1;
    }
    printf("round trip: byte identical\n");
    cpo_string_free(canon);
    cpo_string_free(canon2);
    cpo_graph_free(reparsed);
    cpo_graph_free(graph);

    CpoGraph *bad = NULL;
    if (cpo_graph_from_json("{ nope", &bad) != CPO_STATUS_PARSE) {
        fprintf(stderr, "expected a parse error\n");
        return 1;
    }
    printf("parse error reported: %s\n", cpo_last_error());
    return 0;
}
