Recycle = ['plastic', 'wood', 'glass', 'paper', 'cardboard', 'metal', 'aluminum', 'tin', 'carton']
Compost = ['food', 'produce', 'snack']
Donate = ['clothing', 'jacket', 'shirt', 'pants', 'footwear', 'shoe']
image = types.Image(content=trash_image)
response = client.label_detection(image=image)
labels = [obj.name for obj in response.label_annotations]
if intersects(labels, Recycle):
  return 'It is recyclable.'
elif intersects(labels, Compost):
  return 'It is compostable.'
elif intersects(labels, Donate):
  return 'It is donatable.'
