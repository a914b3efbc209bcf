from hlunfold.cli import main

main()
