#ifndef SCC_US_DATA_HPP
#define SCC_US_DATA_HPP

// Bundled data for the 51-region US map (50 states + DC): contiguity
// adjacency (land borders incl. the Four Corners point), 2020 census
// populations, and the two simulation partition templates. The same content
// ships as CSV files under data/.
namespace scc::us_data {

extern const char* const kStateAdjacencyCsv;
extern const char* const kStatePopulationCsv;
extern const char* const kStructure1LabelsCsv;  // one spatially discontiguous cluster
extern const char* const kStructure2LabelsCsv;  // three contiguous clusters

}  // namespace scc::us_data

#endif
