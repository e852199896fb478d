Recycle = ['glass']
response = client.label_detection(image=image)
def classify(labels):
    return 'Recycle'
