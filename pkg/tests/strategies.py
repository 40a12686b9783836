from hypothesis import strategies as st

from vulngraph import build_graph

host_labels = st.sampled_from([f"h{i}" for i in range(8)])
vuln_labels = st.sampled_from([str(i) for i in range(10)])

host_records = st.lists(
    st.tuples(host_labels, st.lists(vuln_labels, max_size=6)), max_size=8
)
graphs = host_records.map(build_graph)
