from hlunfold.models import main

main()
