# Decision Diagram Blow-up Lab Utils Module
