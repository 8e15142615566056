import enum


class QMode(str, enum.Enum):
    generic = 'generic'
    zero = 'zero'


class Generator(str, enum.Enum):
    a_plus = 'a_plus'
    a_minus = 'a_minus'
    k = 'k'
    h = 'h'


class VertexKind(str, enum.Enum):
    R_hat = 'R_hat'
    S_hat = 'S_hat'


class Status(str, enum.Enum):
    passed = 'pass'
    failed = 'fail'


class Suite(str, enum.Enum):
    r_properties = 'r-properties'
    tetrahedron = 'tetrahedron'
    eigenvectors = 'eigenvectors'
    intertwining = 'intertwining'
    bilinear = 'bilinear'
    q0_limit = 'q0-limit'
    hat_relation = 'hat-relation'
    embedding = 'embedding'
    f_symmetry = 'f-symmetry'
    bilinear_x = 'bilinear-x'
    oracle = 'oracle'
    markov = 'markov'


class OutputFormat(str, enum.Enum):
    text = 'text'
    json = 'json'
    csv = 'csv'
    xml = 'xml'
